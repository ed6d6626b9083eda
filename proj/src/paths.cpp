#include "orthant/paths.hpp"

#include "orthant/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orthant {

namespace {

void require_density_horizon(std::size_t density, double horizon) {
    if (density == 0) throw Error(ErrorCode::ZeroDensity, "grid density must be >= 1");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        std::ostringstream os;
        os << "horizon = " << horizon;
        throw Error(ErrorCode::NonpositiveHorizon, os.str());
    }
}

void require_same_grid(const GridPath& a, const GridPath& b) {
    if (a.density() != b.density()) {
        std::ostringstream os;
        os << a.density() << " vs " << b.density();
        throw Error(ErrorCode::DensityMismatch, os.str());
    }
    if (a.dim() != b.dim()) {
        std::ostringstream os;
        os << a.dim() << " vs " << b.dim();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

}  // namespace

std::size_t grid_points(std::size_t density, double horizon) {
    require_density_horizon(density, horizon);
    const double steps = static_cast<double>(density) * horizon;
    // Tolerate representation error in products such as 10 * 0.3.
    return static_cast<std::size_t>(std::floor(steps * (1.0 + 1e-12))) + 1;
}

GridPath::GridPath(std::size_t density, double horizon, std::size_t dim, std::vector<double> values)
    : n_(density), horizon_(horizon), d_(dim), values_(std::move(values)) {
    const std::size_t points = grid_points(density, horizon);
    if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "path dimension must be >= 1");
    if (values_.size() != points * dim) {
        std::ostringstream os;
        os << "expected " << points << " points of dimension " << dim << ", got "
           << values_.size() << " values";
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    if (!all_finite(values_)) throw Error(ErrorCode::NonFinite, "path contains NaN or Inf");
}

GridPath GridPath::constant(std::size_t density, double horizon, std::span<const double> value) {
    const std::size_t points = grid_points(density, horizon);
    std::vector<double> values;
    values.reserve(points * value.size());
    for (std::size_t i = 0; i < points; ++i) values.insert(values.end(), value.begin(), value.end());
    return {density, horizon, value.size(), std::move(values)};
}

std::size_t GridPath::index_at(double t) const noexcept {
    if (t <= 0.0) return 0;
    const auto i = static_cast<std::size_t>(std::floor(t * static_cast<double>(n_) * (1.0 + 1e-12)));
    return std::min(i, size() - 1);
}

StepFunction::StepFunction(std::vector<double> times, std::vector<Vec> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.empty() || times_.size() != values_.size())
        throw Error(ErrorCode::DimensionMismatch, "step function needs one value per jump time");
    if (times_.front() != 0.0) throw Error(ErrorCode::DegenerateInput, "first jump time must be 0");
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) {
            std::ostringstream os;
            os << "jump times must be strictly increasing (index " << i << ")";
            throw Error(ErrorCode::DegenerateInput, os.str());
        }
    }
    const std::size_t d = values_.front().size();
    if (d == 0) throw Error(ErrorCode::DimensionMismatch, "step function dimension must be >= 1");
    for (const auto& v : values_) {
        if (v.size() != d) throw Error(ErrorCode::DimensionMismatch, "inconsistent step values");
        if (!all_finite(v)) throw Error(ErrorCode::NonFinite, "step value contains NaN or Inf");
    }
}

std::span<const double> StepFunction::operator()(double t) const noexcept {
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - times_.begin() - 1, 0));
    return values_[idx];
}

GridPath discretize(const StepFunction& f, std::size_t density, double horizon) {
    const std::size_t points = grid_points(density, horizon);
    const std::size_t d = f.dim();
    std::vector<double> values;
    values.reserve(points * d);
    for (std::size_t i = 0; i < points; ++i) {
        const auto v = f(static_cast<double>(i) / static_cast<double>(density));
        values.insert(values.end(), v.begin(), v.end());
    }
    return {density, horizon, d, std::move(values)};
}

GridPath discretize(const PathSampler& f, std::size_t density, double horizon) {
    const std::size_t points = grid_points(density, horizon);
    std::vector<double> values;
    std::size_t d = 0;
    for (std::size_t i = 0; i < points; ++i) {
        const Vec v = f(static_cast<double>(i) / static_cast<double>(density));
        if (i == 0) {
            d = v.size();
            values.reserve(points * d);
        } else if (v.size() != d) {
            throw Error(ErrorCode::DimensionMismatch, "sampler changed dimension");
        }
        values.insert(values.end(), v.begin(), v.end());
    }
    return {density, horizon, d, std::move(values)};
}

GridPath delay_one_step(const GridPath& u) {
    const std::size_t d = u.dim();
    std::vector<double> values(u.data().size());
    std::copy_n(u.data().begin(), d, values.begin());
    std::copy_n(u.data().begin(), values.size() - d, values.begin() + static_cast<std::ptrdiff_t>(d));
    return {u.density(), u.horizon(), d, std::move(values)};
}

double modulus_of_continuity(const GridPath& y, double delta, double t) {
    const std::size_t last = y.index_at(t);
    const double scaled = delta * static_cast<double>(y.density());
    const auto lag = static_cast<std::size_t>(std::max(0.0, std::ceil(scaled - 1e-9)));
    double w = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        const std::size_t hi = std::min(last, i + lag);
        for (std::size_t j = i + 1; j <= hi; ++j) w = std::max(w, sup_distance(y[i], y[j]));
    }
    return w;
}

double sup_distance(const GridPath& a, const GridPath& b, double t) {
    require_same_grid(a, b);
    const std::size_t last = std::min(a.index_at(t), b.index_at(t));
    double m = 0.0;
    for (std::size_t i = 0; i <= last; ++i) m = std::max(m, sup_distance(a[i], b[i]));
    return m;
}

GridPath refine(const GridPath& u, std::size_t factor) {
    if (factor == 0) throw Error(ErrorCode::ZeroDensity, "refinement factor must be >= 1");
    const std::size_t n = u.density() * factor;
    const std::size_t points = grid_points(n, u.horizon());
    std::vector<double> values;
    values.reserve(points * u.dim());
    for (std::size_t i = 0; i < points; ++i) {
        const auto v = u[std::min(i / factor, u.size() - 1)];
        values.insert(values.end(), v.begin(), v.end());
    }
    return {n, u.horizon(), u.dim(), std::move(values)};
}

GridPath subsample(const GridPath& u, std::size_t density) {
    if (density == 0) throw Error(ErrorCode::ZeroDensity, "density must be >= 1");
    if (u.density() % density != 0) {
        std::ostringstream os;
        os << density << " does not divide " << u.density();
        throw Error(ErrorCode::NotADivisor, os.str());
    }
    const std::size_t stride = u.density() / density;
    const std::size_t points = grid_points(density, u.horizon());
    std::vector<double> values;
    values.reserve(points * u.dim());
    for (std::size_t i = 0; i < points; ++i) {
        const auto v = u[i * stride];
        values.insert(values.end(), v.begin(), v.end());
    }
    return {density, u.horizon(), u.dim(), std::move(values)};
}

GridPath truncate(const GridPath& u, double horizon) {
    const std::size_t points = std::min(grid_points(u.density(), horizon), u.size());
    std::vector<double> values(u.data().begin(),
                               u.data().begin() + static_cast<std::ptrdiff_t>(points * u.dim()));
    return {u.density(), std::min(horizon, u.horizon()), u.dim(), std::move(values)};
}

GridPath add(const GridPath& u, const GridPath& v) {
    require_same_grid(u, v);
    if (u.size() != v.size()) throw Error(ErrorCode::DimensionMismatch, "paths differ in length");
    std::vector<double> values(u.data().size());
    std::transform(u.data().begin(), u.data().end(), v.data().begin(), values.begin(), std::plus<>{});
    return {u.density(), u.horizon(), u.dim(), std::move(values)};
}

}  // namespace orthant
