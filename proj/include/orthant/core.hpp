#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace orthant {

/// A point in R^d. Components are the coordinates along each orthant face.
using Vec = std::vector<double>;

/// Nonnegative d x d matrix Q with zero diagonal. The reflection direction on
/// face {x_j = 0} is the j-th column of (I - Q^T).
///
/// Construction validates entries and requires both the max row sum and the
/// max column sum to be strictly below one. The column norm is the induced
/// sup-norm of Q^T and is the contraction factor used in every bound.
class ReflectionMatrix {
public:
    /// Row-major entries, rows[i][j] = q_ij.
    static ReflectionMatrix validate(const std::vector<std::vector<double>>& rows);

    std::size_t dim() const noexcept { return d_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return q_[i * d_ + j]; }
    double row_norm() const noexcept { return row_norm_; }
    double col_norm() const noexcept { return col_norm_; }

    /// out = Q^T u
    void apply_transpose(std::span<const double> u, std::span<double> out) const noexcept;
    Vec apply_transpose(std::span<const double> u) const;

    /// out = (I - Q^T) u
    void apply_reflection(std::span<const double> u, std::span<double> out) const noexcept;
    Vec apply_reflection(std::span<const double> u) const;

private:
    ReflectionMatrix() = default;

    std::size_t d_ = 0;
    std::vector<double> q_;
    double row_norm_ = 0.0;
    double col_norm_ = 0.0;
};

Vec positive_part(std::span<const double> z);
double sup_norm(std::span<const double> z) noexcept;
/// sup_norm(a - b)
double sup_distance(std::span<const double> a, std::span<const double> b) noexcept;

bool in_orthant(std::span<const double> z, double tol = 0.0) noexcept;
bool all_finite(std::span<const double> z) noexcept;

}  // namespace orthant
