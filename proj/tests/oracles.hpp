#pragma once

// Test-only reference computations. Nothing here calls into the scheme code
// it is used to check.

#include "orthant/core.hpp"
#include "orthant/paths.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace orthant::testing {

/// Classical one-dimensional Skorokhod map: x_i = y_i + max_{j<=i} [-y_j]^+.
inline std::vector<double> running_max_reflection(const GridPath& y) {
    std::vector<double> x(y.size());
    double push = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        push = std::max(push, -y[i][0]);
        x[i] = y[i][0] + push;
    }
    return x;
}

/// Regulator of the one-dimensional map.
inline std::vector<double> running_max_regulator(const GridPath& y) {
    std::vector<double> k(y.size());
    double push = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        push = std::max(push, -y[i][0]);
        k[i] = push;
    }
    return k;
}

/// Modulus by sampling the step path at `sub` equally spaced points per grid
/// cell (plus the point just before each grid point) and comparing every pair.
inline double brute_force_modulus(const GridPath& y, double delta, double t, int sub = 4) {
    std::vector<double> times;
    const double h = 1.0 / static_cast<double>(y.density());
    for (std::size_t i = 0; static_cast<double>(i) * h <= t; ++i) {
        for (int s = 0; s < sub; ++s) {
            const double u = (static_cast<double>(i) + static_cast<double>(s) / sub) * h;
            if (u <= t) times.push_back(u);
        }
        const double before = (static_cast<double>(i) + 1.0) * h * (1.0 - 1e-13);
        if (before <= t) times.push_back(before);
    }
    double w = 0.0;
    for (std::size_t a = 0; a < times.size(); ++a) {
        for (std::size_t b = a + 1; b < times.size(); ++b) {
            if (times[b] - times[a] > delta + 1e-12) continue;
            w = std::max(w, sup_distance(y.at_time(times[a]), y.at_time(times[b])));
        }
    }
    return w;
}

inline GridPath random_walk(std::mt19937_64& rng, std::size_t d, std::size_t n, double horizon, double start_hi = 1.0) {
    std::normal_distribution<double> step(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
    std::uniform_real_distribution<double> start(0.0, start_hi);
    const std::size_t points = grid_points(n, horizon);
    std::vector<double> v(points * d);
    for (std::size_t j = 0; j < d; ++j) v[j] = start(rng);
    for (std::size_t i = 1; i < points; ++i)
        for (std::size_t j = 0; j < d; ++j) v[i * d + j] = v[(i - 1) * d + j] + step(rng);
    return {n, horizon, d, std::move(v)};
}

inline Vec random_point(std::mt19937_64& rng, std::size_t d, double lo = -3.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vec z(d);
    for (auto& c : z) c = u(rng);
    return z;
}

}  // namespace orthant::testing
