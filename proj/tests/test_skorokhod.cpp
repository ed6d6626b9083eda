#include "orthant/error.hpp"
#include "orthant/scenario.hpp"
#include "orthant/skorokhod.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace orthant;

TEST_CASE("fast scheme on the two-dimensional jump example") {
    const auto q = jump_example_matrix();
    for (std::size_t n : {4u, 16u, 64u}) {
        CAPTURE(n);
        const auto y = discretize(jump_example_input(), n, 2.0);
        const auto s = fast_scheme(q, y);
        double sup_x = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double k = 0.0;
            double x = 0.0;
            if (i >= n) {
                const double half = std::ldexp(1.0, -static_cast<int>(i - n));
                k = 2.0 - half;
                x = -half / 2.0;
            }
            CHECK(std::abs(s.k[i][0] - k) <= 1e-12);
            CHECK(std::abs(s.k[i][1] - k) <= 1e-12);
            CHECK(std::abs(s.x[i][0] - x) <= 1e-12);
            sup_x = std::max(sup_x, sup_norm(s.x[i]));
        }
        // the scheme overshoots by 1/2 at the jump, whatever n is
        CHECK(std::abs(sup_x - 0.5) <= 1e-14);
    }
}

TEST_CASE("exact solution of the jump example") {
    const auto q = jump_example_matrix();
    const auto exact = step_function_exact(q, jump_example_input());
    REQUIRE(exact.x.values().size() == 2);
    CHECK(sup_norm(exact.x.values()[1]) <= 1e-11);
    CHECK(exact.k.values()[1][0] == doctest::Approx(2.0).epsilon(1e-11));

    const auto y = discretize(jump_example_input(), 16, 2.0);
    const auto oracle = fixed_point_oracle(q, y);
    CHECK(sup_distance(oracle.x, discretize(exact.x, 16, 2.0), 2.0) <= 1e-10);
}

TEST_CASE("fast scheme rejects bad inputs") {
    const auto q = jump_example_matrix();
    try {
        (void)fast_scheme(q, GridPath(1, 1.0, 2, {-0.1, 0.0, 0.0, 0.0}));
        FAIL("expected StartOutsideOrthant");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StartOutsideOrthant);
    }
    try {
        (void)fast_scheme(q, GridPath(1, 1.0, 1, {0.0, 0.0}));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("one-dimensional scheme is the running-max reflection") {
    const auto q = ReflectionMatrix::validate({{0.0}});
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto y = testing::random_walk(rng, 1, 200, 1.0, 0.5);
        const auto s = fast_scheme(q, y);
        const auto x = testing::running_max_reflection(y);
        const auto k = testing::running_max_regulator(y);
        for (std::size_t i = 0; i < y.size(); ++i) {
            CHECK(std::abs(s.x[i][0] - x[i]) <= 1e-12);
            CHECK(std::abs(s.k[i][0] - k[i]) <= 1e-12);
        }
    }
}

TEST_CASE("scheme invariants on random inputs") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    std::uniform_real_distribution<double> norm(0.0, 0.9);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = dim(rng);
        const auto q = random_reflection_matrix(rng, d, norm(rng));
        const auto y = testing::random_walk(rng, d, 64, 1.0);
        const auto s = fast_scheme(q, y);
        const double scale = 1.0 + sup_norm(y.data());

        CHECK(scheme_form_discrepancy(q, y) <= 1e-12);
        CHECK(fixed_point_form_residual(q, y, s.k) <= 1e-12 * scale);
        CHECK(reconstruction_residual(q, y, s) <= 1e-12 * scale);
        CHECK(sup_norm(s.k[0]) == 0.0);
        for (std::size_t i = 1; i < y.size(); ++i)
            for (std::size_t j = 0; j < d; ++j) CHECK(s.k[i][j] >= s.k[i - 1][j]);
    }
}

TEST_CASE("Picard oracle solves the Skorokhod problem") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> norm(0.0, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto q = random_reflection_matrix(rng, 3, norm(rng));
        const auto y = testing::random_walk(rng, 3, 32, 1.0);
        const auto s = fixed_point_oracle(q, y);
        const double scale = 1.0 + sup_norm(y.data());
        CHECK(reconstruction_residual(q, y, s) <= 1e-12 * scale);
        for (std::size_t i = 0; i < y.size(); ++i) {
            CHECK(in_orthant(s.x[i], 1e-10 * scale));
            // k only grows at times when some push is needed, and then x_j = 0
            if (i > 0)
                for (std::size_t j = 0; j < 3; ++j)
                    if (s.k[i][j] > s.k[i - 1][j] + 1e-9 * scale) CHECK(std::abs(s.x[i][j]) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("fixed_point_oracle honours its iteration budget") {
    const auto q = jump_example_matrix();
    const auto y = discretize(jump_example_input(), 4, 2.0);
    try {
        (void)fixed_point_oracle(q, y, 1e-12, 2);
        FAIL("expected MaxIterExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MaxIterExceeded);
    }
}

TEST_CASE("bound constants") {
    const auto q = jump_example_matrix();
    CHECK(approximation_constant(q) == doctest::Approx(4.0 + 1.0 + 1.5 * 4.0));
    CHECK(stability_regulator_constant(q) == 2.0);
    CHECK(stability_combined_constant(q) == 6.0);
}

TEST_CASE("approximation bound on a continuous input") {
    const auto q = jump_example_matrix();
    for (std::size_t n : {10u, 100u}) {
        const auto y_ref = discretize(PathSampler(continuous_sine), 10 * n, 1.0);
        const auto reference = fixed_point_oracle(q, y_ref);
        const auto rep = check_theorem3(q, y_ref, n, reference, 1.0);
        CHECK(rep.pass);
        CHECK(rep.lhs <= rep.rhs);
    }
}

TEST_CASE("stability bound on random pairs") {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    std::uniform_real_distribution<double> norm(0.0, 0.9);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = dim(rng);
        const auto q = random_reflection_matrix(rng, d, norm(rng));
        const auto y1 = testing::random_walk(rng, d, 32, 1.0);
        const auto y2 = testing::random_walk(rng, d, 32, 1.0);
        const auto rep = check_theorem4(q, y1, y2, 1.0);
        CHECK(rep.regulator.pass);
        CHECK(rep.combined.pass);
    }
}
