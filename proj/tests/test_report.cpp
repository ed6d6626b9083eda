#include "orthant/error.hpp"
#include "orthant/report.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace orthant;

TEST_CASE("fit_loglog recovers exact power laws") {
    for (double slope : {1.0, 2.0}) {
        std::vector<std::pair<double, double>> pts;
        for (double x : {1.0, 2.0, 4.0, 8.0}) pts.emplace_back(x, 3.0 * std::pow(x, slope));
        const auto fit = fit_loglog(pts);
        CHECK(fit.slope == doctest::Approx(slope).epsilon(1e-12));
        CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("fit_loglog tolerates multiplicative noise") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> noise(0.9, 1.1);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 8; ++i) {
        const double x = std::pow(2.0, -i);
        pts.emplace_back(x, x * noise(rng));
    }
    CHECK(std::abs(fit_loglog(pts).slope - 1.0) <= 0.1);
}

TEST_CASE("fit_loglog rejects degenerate data") {
    const std::vector<std::pair<double, double>> single{{1.0, 1.0}};
    const std::vector<std::pair<double, double>> same_x{{2.0, 1.0}, {2.0, 3.0}};
    const std::vector<std::pair<double, double>> zero_y{{1.0, 0.0}, {2.0, 3.0}};
    CHECK_THROWS_AS(fit_loglog(single), Error);
    CHECK_THROWS_AS(fit_loglog(same_x), Error);
    CHECK_THROWS_AS(fit_loglog(zero_y), Error);
}

TEST_CASE("fit_rate sorts rows and skips zero errors") {
    RateReport rep;
    for (std::size_t n : {64u, 16u, 256u}) rep.rows.push_back({n, 1.0 / static_cast<double>(n), std::log(double(n)) / double(n), 0.0});
    rep.rows.push_back({8, 0.125, 0.0, 0.0});
    fit_rate(rep);
    CHECK(rep.rows.front().n == 8);
    REQUIRE(rep.fit.has_value());
    CHECK(rep.fit->slope == doctest::Approx(1.0).epsilon(1e-12));

    RateReport lonely;
    lonely.rows = {{16, 1.0 / 16, 0.5, 0.0}, {32, 1.0 / 32, 0.0, 0.0}};
    fit_rate(lonely);
    CHECK_FALSE(lonely.fit.has_value());
}

TEST_CASE("rate_abscissa") { CHECK(rate_abscissa(100) == doctest::Approx(std::log(std::log(100.0) / 100.0))); }
