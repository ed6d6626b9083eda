#pragma once

#include "orthant/core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace orthant {

/// Pi_Q(z) = z + (I - Q^T) r_bar where r_bar = [Q^T r_bar - z]^+.
struct ProjectionResult {
    Vec z_in;
    Vec pi;
    Vec r_bar;
    std::size_t iterations = 0;
    /// sup_norm(r_bar - [Q^T r_bar - z]^+)
    double residual = 0.0;
};

inline constexpr double kDefaultTolerance = 1e-12;

/// Iteration budget for reaching `tol` from r_0 = 0 at contraction rate col_norm(Q).
std::size_t default_max_iter(const ReflectionMatrix& q, std::span<const double> z, double tol);

/// Iterates r_{m+1} = [Q^T r_m - z]^+ from r_0 = 0. Stops once the increment is
/// at most tol * (1 - col_norm(Q)), which puts r_m within tol of the fixed point.
/// Throws MaxIterExceeded if the budget runs out.
ProjectionResult project_fixed_point(const ReflectionMatrix& q, std::span<const double> z,
                                     double tol = kDefaultTolerance,
                                     std::optional<std::size_t> max_iter = std::nullopt);

/// z_0 = z, z_{m+1} = z_m + (I - Q^T)[-z_m]^+ for m < steps. Returns steps + 1 points.
std::vector<Vec> z_sequence(const ReflectionMatrix& q, std::span<const double> z, std::size_t steps);

/// Same sequence through the cumulative form z + (I - Q^T) sum_{i<m} [-z_i]^+.
std::vector<Vec> z_sequence_cumulative(const ReflectionMatrix& q, std::span<const double> z,
                                       std::size_t steps);

/// zbar_m = z + (I - Q^T) r_m with r_m from the regulator iteration above.
std::vector<Vec> zbar_sequence(const ReflectionMatrix& q, std::span<const double> z, std::size_t steps);

/// max over m <= steps of |z_m - zbar_m|; the two sequences coincide in exact arithmetic.
double verify_lemma1(const ReflectionMatrix& q, std::span<const double> z, std::size_t steps);

}  // namespace orthant
