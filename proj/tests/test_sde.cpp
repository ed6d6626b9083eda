#include "orthant/error.hpp"
#include "orthant/scenario.hpp"
#include "orthant/sde.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace orthant;

namespace {

void identity(std::span<const double> x, std::span<double> out) {
    const std::size_t d = x.size();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out[i * d + j] = i == j ? 1.0 : 0.0;
}

}  // namespace

TEST_CASE("generate_wiener is deterministic and starts at zero") {
    const WienerConfig cfg{7, 64, 2, 1.0};
    const auto a = generate_wiener(cfg);
    const auto b = generate_wiener(cfg);
    CHECK(a == b);
    CHECK(a.size() == 65);
    CHECK(sup_norm(a[0]) == 0.0);
    CHECK_FALSE(a == generate_wiener({8, 64, 2, 1.0}));
}

TEST_CASE("Wiener increments have variance 1/n") {
    const std::size_t n = 4096;
    const auto w = generate_wiener({123, n, 1, 4.0});
    const auto inc = increments(w);
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < inc.size(); ++i) {
        sum += inc[i][0];
        sq += inc[i][0] * inc[i][0];
    }
    const double m = static_cast<double>(inc.size());
    const double var = sq / m - (sum / m) * (sum / m);
    // 16384 samples: relative standard error of the variance is about 1.1%
    CHECK(var * static_cast<double>(n) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("coarse increments telescope from the fine grid") {
    const auto w = generate_wiener({3, 64, 2, 1.0});
    const auto coarse = coarsen(w, 8);
    REQUIRE(coarse.size() == 8);
    for (std::size_t i = 0; i < coarse.size(); ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(coarse[i][j] == doctest::Approx(w[(i + 1) * 8][j] - w[i * 8][j]).epsilon(1e-14));
    CHECK_THROWS_AS(coarsen(w, 5), Error);
}

TEST_CASE("unit-diffusion semimartingale scheme reduces to the fast scheme") {
    const auto q = jump_example_matrix();
    const auto y = discretize(jump_example_input(), 16, 2.0);
    const auto path = fast_euler_semimartingale(q, Vec{0.0, 0.0}, identity, increments(y));
    const auto direct = fast_scheme(q, y);
    CHECK(sup_distance(path.solution.x, direct.x, 2.0) <= 1e-14);
    CHECK(sup_distance(path.solution.k, direct.k, 2.0) <= 1e-14);
    CHECK(sup_distance(path.input, y, 2.0) <= 1e-14);
}

TEST_CASE("diffusion scheme output satisfies the reconstruction identity") {
    const auto named = model_by_name("diffusion-2d");
    const auto w = generate_wiener({11, 256, 2, 1.0});
    for (auto form : {SchemeForm::Increment, SchemeForm::Regulator}) {
        const auto path = fast_euler_diffusion(named.q, named.model, w, 64, form);
        CHECK(reconstruction_residual(named.q, path.input, path.solution) <= 1e-12);
    }
    const auto a = fast_euler_diffusion(named.q, named.model, w, 64, SchemeForm::Increment);
    const auto b = fast_euler_diffusion(named.q, named.model, w, 64, SchemeForm::Regulator);
    CHECK(sup_distance(a.solution.x, b.solution.x, 1.0) <= 1e-12);
}

TEST_CASE("reflected Brownian motion from zero equals the running-max map of W") {
    const auto named = model_by_name("bm-1d");
    const auto w = generate_wiener({5, 128, 1, 1.0});
    const auto path = fast_euler_diffusion(named.q, named.model, w, 128);
    const auto x = testing::running_max_reflection(w);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(path.solution.x[i][0] - x[i]) <= 1e-12);
}

TEST_CASE("non-finite coefficients are reported") {
    auto named = model_by_name("bm-1d");
    named.model.drift = [](std::span<const double>, std::span<double> out) { out[0] = std::nan(""); };
    const auto w = generate_wiener({1, 8, 1, 1.0});
    try {
        (void)fast_euler_diffusion(named.q, named.model, w, 8);
        FAIL("expected NonFiniteCoefficient");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFiniteCoefficient);
    }
}

TEST_CASE("strong_error validates the experiment") {
    const auto named = model_by_name("bm-1d");
    RateExperiment exp;
    exp.wiener = {1, 64, 1, 1.0};
    exp.densities = {8, 16};
    exp.paths = 1;
    try {
        (void)strong_error(named.q, named.model, exp);
        FAIL("expected InsufficientPaths");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientPaths);
    }
}

TEST_CASE("strong_error is independent of the thread count") {
    const auto named = model_by_name("diffusion-2d");
    RateExperiment exp;
    exp.wiener = {17, 256, 2, 1.0};
    exp.densities = {16, 64};
    exp.paths = 20;
    exp.threads = 1;
    const auto one = strong_error(named.q, named.model, exp);
    exp.threads = 3;
    const auto three = strong_error(named.q, named.model, exp);
    REQUIRE(one.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(one.rows[i].mean == three.rows[i].mean);
}

TEST_CASE("strong error rate for reflected Brownian motion") {
    const auto named = model_by_name("bm-1d");
    RateExperiment exp;
    exp.wiener = {20240521, 4096, 1, 1.0};
    exp.densities = {16, 32, 64, 128, 256, 512};
    exp.paths = 200;
    exp.grid = ErrorGrid::FinePoints;
    for (unsigned p : {1u, 2u}) {
        exp.p = p;
        const auto report = strong_error(named.q, named.model, exp);
        REQUIRE(report.fit.has_value());
        CAPTURE(p);
        CHECK(report.fit->slope >= static_cast<double>(p) - 0.5);
        CHECK(report.fit->slope <= static_cast<double>(p) + 0.5);
    }
}
