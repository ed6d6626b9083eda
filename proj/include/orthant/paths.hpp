#pragma once

#include "orthant/core.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace orthant {

/// Number of grid points i/n with i/n <= horizon, i.e. floor(n * horizon) + 1.
std::size_t grid_points(std::size_t density, double horizon);

/// Cadlag step path on the uniform grid {i/n}. The path is constant on
/// [i/n, (i+1)/n), so evaluation at t returns the value at index floor(n t).
class GridPath {
public:
    /// `values` is row-major: point i occupies [i*dim, (i+1)*dim).
    GridPath(std::size_t density, double horizon, std::size_t dim, std::vector<double> values);

    static GridPath constant(std::size_t density, double horizon, std::span<const double> value);

    std::size_t density() const noexcept { return n_; }
    double horizon() const noexcept { return horizon_; }
    std::size_t dim() const noexcept { return d_; }
    std::size_t size() const noexcept { return values_.size() / d_; }
    double time(std::size_t i) const noexcept { return static_cast<double>(i) / static_cast<double>(n_); }

    std::span<const double> operator[](std::size_t i) const noexcept {
        return {values_.data() + i * d_, d_};
    }
    std::span<const double> at_time(double t) const noexcept { return (*this)[index_at(t)]; }

    /// floor(n t) clamped to the last grid point.
    std::size_t index_at(double t) const noexcept;

    const std::vector<double>& data() const noexcept { return values_; }

    friend bool operator==(const GridPath&, const GridPath&) = default;

private:
    std::size_t n_;
    double horizon_;
    std::size_t d_;
    std::vector<double> values_;
};

/// y_t = sum_i y_{t_i} 1_{[t_i, t_{i+1})}(t) with strictly increasing jump times, t_0 = 0.
class StepFunction {
public:
    StepFunction(std::vector<double> times, std::vector<Vec> values);

    std::size_t dim() const noexcept { return values_.front().size(); }
    std::size_t jumps() const noexcept { return times_.size() - 1; }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<Vec>& values() const noexcept { return values_; }

    std::span<const double> operator()(double t) const noexcept;

private:
    std::vector<double> times_;
    std::vector<Vec> values_;
};

using PathSampler = std::function<Vec(double)>;

GridPath discretize(const StepFunction& f, std::size_t density, double horizon);
GridPath discretize(const PathSampler& f, std::size_t density, double horizon);

/// out[i] = u[i-1] for i >= 1 and out[0] = u[0].
GridPath delay_one_step(const GridPath& u);

/// Sup of |y_s - y_s'| over s, s' <= t with |s - s'| <= delta. For a step path
/// this reduces to grid pairs whose index gap is at most ceil(n delta).
double modulus_of_continuity(const GridPath& y, double delta, double t);

/// max over i/n <= t of |a_i - b_i|.
double sup_distance(const GridPath& a, const GridPath& b, double t);

/// Same path on a grid `factor` times finer (each value repeated).
GridPath refine(const GridPath& u, std::size_t factor);

/// Values at the coarser density n; requires n to divide u.density().
GridPath subsample(const GridPath& u, std::size_t density);

/// The path restricted to [0, horizon].
GridPath truncate(const GridPath& u, double horizon);

/// Componentwise u + v on equal grids.
GridPath add(const GridPath& u, const GridPath& v);

}  // namespace orthant
