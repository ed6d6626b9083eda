#include "orthant/error.hpp"
#include "orthant/projection.hpp"
#include "orthant/scenario.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace orthant;

TEST_CASE("projection of (-1, -1) under the symmetric example") {
    const auto q = jump_example_matrix();
    const auto res = project_fixed_point(q, Vec{-1.0, -1.0});
    // r = [0.5 r + 1]^+ gives r = 2 and Pi = 0
    CHECK(res.r_bar[0] == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(res.r_bar[1] == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(std::abs(res.pi[0]) <= 1e-11);
    CHECK(std::abs(res.pi[1]) <= 1e-11);
    CHECK(res.residual <= 1e-11);
}

TEST_CASE("projection fixes points of the orthant") {
    const auto q = jump_example_matrix();
    const auto res = project_fixed_point(q, Vec{0.3, 2.0});
    CHECK(res.pi == Vec{0.3, 2.0});
    CHECK(res.r_bar == Vec{0.0, 0.0});
}

TEST_CASE("projection with Q = 0 is the positive part") {
    const auto q = ReflectionMatrix::validate({{0.0, 0.0}, {0.0, 0.0}});
    const auto res = project_fixed_point(q, Vec{-1.5, 0.7});
    CHECK(res.pi == Vec{0.0, 0.7});
    CHECK(res.r_bar == Vec{1.5, 0.0});
}

TEST_CASE("projection checks its inputs") {
    const auto q = jump_example_matrix();
    CHECK_THROWS_AS(project_fixed_point(q, Vec{1.0}), Error);
    CHECK_THROWS_AS(project_fixed_point(q, Vec{1.0, std::nan("")}), Error);
    try {
        (void)project_fixed_point(q, Vec{-1.0, -1.0}, 1e-12, 3);
        FAIL("expected MaxIterExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MaxIterExceeded);
    }
}

TEST_CASE("projection properties on random inputs") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    std::uniform_real_distribution<double> norm(0.0, 0.9);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = dim(rng);
        const auto q = random_reflection_matrix(rng, d, norm(rng));
        const Vec z = testing::random_point(rng, d);
        const auto res = project_fixed_point(q, z);
        const double scale = 1.0 + sup_norm(z);

        CHECK(res.residual <= 1e-10 * scale);
        CHECK(in_orthant(res.pi, 1e-10 * scale));
        // complementarity: r_i > 0 only where Pi_i = 0
        for (std::size_t j = 0; j < d; ++j) CHECK(res.r_bar[j] * res.pi[j] <= 1e-8 * scale * scale);
        // Pi = z + (I - Q^T) r
        const Vec push = q.apply_reflection(res.r_bar);
        for (std::size_t j = 0; j < d; ++j) CHECK(res.pi[j] == doctest::Approx(z[j] + push[j]).epsilon(1e-12));

        // raising z lowers the regulator
        Vec up = z;
        for (auto& c : up) c += 0.25;
        const auto higher = project_fixed_point(q, up);
        for (std::size_t j = 0; j < d; ++j) CHECK(higher.r_bar[j] <= res.r_bar[j] + 1e-10 * scale);

        // regulator is Lipschitz in z with constant 1 / (1 - q)
        const Vec w = testing::random_point(rng, d);
        const auto other = project_fixed_point(q, w);
        CHECK(sup_distance(res.r_bar, other.r_bar) <=
              sup_distance(z, w) / (1.0 - q.col_norm()) + 1e-10 * (scale + sup_norm(w)));
    }
}

TEST_CASE("the z and zbar sequences coincide") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    std::uniform_int_distribution<std::size_t> steps(0, 30);
    std::uniform_real_distribution<double> norm(0.0, 0.95);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = dim(rng);
        const auto q = random_reflection_matrix(rng, d, norm(rng));
        const Vec z = testing::random_point(rng, d, -5.0, 5.0);
        CHECK(verify_lemma1(q, z, steps(rng)) <= 1e-12 * (1.0 + sup_norm(z)));
    }
}

TEST_CASE("z sequence forms agree and converge to the projection") {
    const auto q = jump_example_matrix();
    const Vec z{-1.0, -1.0};
    const auto a = z_sequence(q, z, 60);
    const auto b = z_sequence_cumulative(q, z, 60);
    REQUIRE(a.size() == 61);
    for (std::size_t m = 0; m < a.size(); ++m) CHECK(sup_distance(a[m], b[m]) <= 1e-13);
    // z_m = -(1/2)^m componentwise
    CHECK(a[1][0] == -0.5);
    CHECK(a[3][1] == -0.125);
    CHECK(sup_norm(a.back()) <= 1e-15);
}
