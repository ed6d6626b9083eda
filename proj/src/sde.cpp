#include "orthant/sde.hpp"

#include "orthant/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace orthant {

namespace {

void require_divisor(std::size_t fine, std::size_t coarse) {
    if (coarse == 0) throw Error(ErrorCode::ZeroDensity, "density must be >= 1");
    if (fine % coarse != 0) {
        std::ostringstream os;
        os << coarse << " does not divide " << fine;
        throw Error(ErrorCode::NotADivisor, os.str());
    }
}

// Runs the fast scheme with per-step input increments supplied by `next_dy(i, x, dy)`.
template <typename IncrementFn>
SdePath run_scheme(const ReflectionMatrix& q, std::span<const double> x0, std::size_t steps,
                   std::size_t density, double horizon, SchemeForm form, IncrementFn&& next_dy) {
    const std::size_t d = q.dim();
    if (x0.size() != d) throw Error(ErrorCode::DimensionMismatch, "initial point dimension differs from Q");
    if (!in_orthant(x0)) throw Error(ErrorCode::StartOutsideOrthant, "X_0 must lie in the orthant");

    const std::size_t points = steps + 1;
    std::vector<double> xs(points * d);
    std::vector<double> ks(points * d, 0.0);
    std::vector<double> ys(points * d);
    Vec x(x0.begin(), x0.end());
    Vec k(d, 0.0);
    Vec y = x;
    Vec dy(d);
    Vec scratch(d);
    std::copy(x.begin(), x.end(), xs.begin());
    std::copy(y.begin(), y.end(), ys.begin());

    for (std::size_t i = 0; i < steps; ++i) {
        next_dy(i, std::span<const double>(x), std::span<double>(dy));
        if (!all_finite(dy)) {
            std::ostringstream os;
            os << "coefficient produced a non-finite increment at step " << i;
            throw Error(ErrorCode::NonFiniteCoefficient, os.str());
        }
        for (std::size_t j = 0; j < d; ++j) y[j] += dy[j];
        if (form == SchemeForm::Increment) {
            fast_step(q, x, k, dy, scratch);
        } else {
            q.apply_transpose(k, scratch);
            for (std::size_t j = 0; j < d; ++j) k[j] = std::max(std::max(scratch[j] - y[j], 0.0), k[j]);
            q.apply_reflection(k, scratch);
            for (std::size_t j = 0; j < d; ++j) x[j] = y[j] + scratch[j];
        }
        const auto offset = static_cast<std::ptrdiff_t>((i + 1) * d);
        std::copy(x.begin(), x.end(), xs.begin() + offset);
        std::copy(k.begin(), k.end(), ks.begin() + offset);
        std::copy(y.begin(), y.end(), ys.begin() + offset);
    }
    return {{GridPath(density, horizon, d, std::move(xs)), GridPath(density, horizon, d, std::move(ks))},
            GridPath(density, horizon, d, std::move(ys))};
}

// out = m v for row-major d x d m
void mat_vec(std::span<const double> m, std::span<const double> v, std::span<double> out) {
    const std::size_t d = v.size();
    for (std::size_t r = 0; r < d; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) acc += m[r * d + c] * v[c];
        out[r] = acc;
    }
}

template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> failures(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < count; i += threads) body(i);
                } catch (...) {
                    failures[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

void validate_experiment(const RateExperiment& exp) {
    if (exp.paths < 2) throw Error(ErrorCode::InsufficientPaths, "need at least two Monte Carlo paths");
    if (exp.p == 0) throw Error(ErrorCode::DegenerateInput, "moment exponent p must be >= 1");
    if (exp.densities.empty()) throw Error(ErrorCode::DegenerateInput, "no densities requested");
    for (std::size_t n : exp.densities) require_divisor(exp.wiener.n_max, n);
}

RateRow summarize(std::size_t n, std::span<const double> samples) {
    const auto m = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= m;
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= (m - 1.0);
    return {n, 1.0 / static_cast<double>(n), mean, std::sqrt(var / m)};
}

WienerConfig path_config(const RateExperiment& exp, std::size_t path, std::size_t dim) {
    WienerConfig cfg = exp.wiener;
    cfg.seed = exp.wiener.seed + path;
    cfg.dim = dim;
    return cfg;
}

}  // namespace

void DiffusionModel::validate() const {
    if (x0.empty()) throw Error(ErrorCode::DimensionMismatch, "model dimension must be >= 1");
    if (!all_finite(x0)) throw Error(ErrorCode::NonFinite, "X_0 contains NaN or Inf");
    if (!in_orthant(x0)) throw Error(ErrorCode::StartOutsideOrthant, "X_0 must lie in the orthant");
    if (!drift || !diffusion) throw Error(ErrorCode::DegenerateInput, "model needs drift and diffusion fields");
}

DriverStream::DriverStream(std::size_t density, double horizon, std::size_t dim, std::vector<double> increments)
    : n_(density), horizon_(horizon), d_(dim), increments_(std::move(increments)) {
    if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "driver dimension must be >= 1");
    const std::size_t steps = grid_points(density, horizon) - 1;
    if (increments_.size() != steps * dim) {
        std::ostringstream os;
        os << "expected " << steps << " increments of dimension " << dim;
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    if (!all_finite(increments_)) throw Error(ErrorCode::NonFinite, "driver contains NaN or Inf");
}

GridPath generate_wiener(const WienerConfig& cfg) {
    const std::size_t points = grid_points(cfg.n_max, cfg.horizon);
    if (cfg.dim == 0) throw Error(ErrorCode::DimensionMismatch, "Wiener dimension must be >= 1");
    std::mt19937_64 engine(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(cfg.n_max)));

    std::vector<double> values(points * cfg.dim, 0.0);
    for (std::size_t i = 1; i < points; ++i) {
        for (std::size_t j = 0; j < cfg.dim; ++j) {
            values[i * cfg.dim + j] = values[(i - 1) * cfg.dim + j] + normal(engine);
        }
    }
    return {cfg.n_max, cfg.horizon, cfg.dim, std::move(values)};
}

DriverStream coarsen(const GridPath& w, std::size_t density) {
    require_divisor(w.density(), density);
    const std::size_t stride = w.density() / density;
    const std::size_t steps = grid_points(density, w.horizon()) - 1;
    const std::size_t d = w.dim();
    std::vector<double> inc(steps * d);
    for (std::size_t i = 0; i < steps; ++i) {
        const auto lo = w[i * stride];
        const auto hi = w[(i + 1) * stride];
        for (std::size_t j = 0; j < d; ++j) inc[i * d + j] = hi[j] - lo[j];
    }
    return {density, w.horizon(), d, std::move(inc)};
}

DriverStream increments(const GridPath& z) { return coarsen(z, z.density()); }

SdePath fast_euler_semimartingale(const ReflectionMatrix& q, std::span<const double> x0, const Field& sigma,
                                  const DriverStream& driver, SchemeForm form) {
    const std::size_t d = q.dim();
    if (driver.dim() != d) throw Error(ErrorCode::DimensionMismatch, "driver dimension differs from Q");
    Vec s(d * d);
    return run_scheme(q, x0, driver.size(), driver.density(), driver.horizon(), form,
                      [&](std::size_t i, std::span<const double> x, std::span<double> dy) {
                          sigma(x, s);
                          if (!all_finite(s))
                              throw Error(ErrorCode::NonFiniteCoefficient, "sigma returned NaN or Inf");
                          mat_vec(s, driver[i], dy);
                      });
}

SdePath fast_euler_diffusion(const ReflectionMatrix& q, const DiffusionModel& model, const GridPath& w,
                             std::size_t density, SchemeForm form) {
    model.validate();
    const std::size_t d = q.dim();
    if (model.dim() != d || w.dim() != d)
        throw Error(ErrorCode::DimensionMismatch, "model, Wiener path and Q must share a dimension");
    const DriverStream driver = coarsen(w, density);
    const double dt = 1.0 / static_cast<double>(density);
    Vec s(d * d);
    Vec b(d);
    return run_scheme(q, model.x0, driver.size(), density, w.horizon(), form,
                      [&](std::size_t i, std::span<const double> x, std::span<double> dy) {
                          model.drift(x, b);
                          model.diffusion(x, s);
                          if (!all_finite(b) || !all_finite(s))
                              throw Error(ErrorCode::NonFiniteCoefficient, "drift or diffusion returned NaN or Inf");
                          mat_vec(s, driver[i], dy);
                          for (std::size_t j = 0; j < d; ++j) dy[j] += b[j] * dt;
                      });
}

RateReport strong_error(const ReflectionMatrix& q, const DiffusionModel& model, const RateExperiment& exp) {
    validate_experiment(exp);
    model.validate();
    const std::size_t nd = exp.densities.size();
    std::vector<double> errors(exp.paths * nd);

    parallel_for(exp.paths, exp.threads, [&](std::size_t path) {
        const GridPath w = generate_wiener(path_config(exp, path, model.dim()));
        const auto reference = fast_euler_diffusion(q, model, w, exp.wiener.n_max).solution.x;
        for (std::size_t c = 0; c < nd; ++c) {
            const std::size_t n = exp.densities[c];
            const auto approx = fast_euler_diffusion(q, model, w, n).solution.x;
            const std::size_t stride = exp.wiener.n_max / n;
            double worst = 0.0;
            if (exp.grid == ErrorGrid::SharedPoints) {
                for (std::size_t i = 0; i < approx.size(); ++i)
                    worst = std::max(worst, sup_distance(approx[i], reference[i * stride]));
            } else {
                for (std::size_t i = 0; i < reference.size(); ++i)
                    worst = std::max(worst, sup_distance(approx[std::min(i / stride, approx.size() - 1)], reference[i]));
            }
            errors[path * nd + c] = std::pow(worst, 2.0 * exp.p);
        }
    });

    RateReport report;
    report.p = exp.p;
    report.paths = exp.paths;
    std::vector<double> column(exp.paths);
    for (std::size_t c = 0; c < nd; ++c) {
        for (std::size_t path = 0; path < exp.paths; ++path) column[path] = errors[path * nd + c];
        report.rows.push_back(summarize(exp.densities[c], column));
    }
    fit_rate(report);
    return report;
}

std::vector<RateRow> sup_second_moment(const ReflectionMatrix& q, const DiffusionModel& model,
                                       const RateExperiment& exp) {
    validate_experiment(exp);
    model.validate();
    const std::size_t nd = exp.densities.size();
    std::vector<double> moments(exp.paths * nd);

    parallel_for(exp.paths, exp.threads, [&](std::size_t path) {
        const GridPath w = generate_wiener(path_config(exp, path, model.dim()));
        for (std::size_t c = 0; c < nd; ++c) {
            const auto x = fast_euler_diffusion(q, model, w, exp.densities[c]).solution.x;
            const double s = sup_norm(x.data());
            moments[path * nd + c] = s * s;
        }
    });

    std::vector<RateRow> rows;
    std::vector<double> column(exp.paths);
    for (std::size_t c = 0; c < nd; ++c) {
        for (std::size_t path = 0; path < exp.paths; ++path) column[path] = moments[path * nd + c];
        rows.push_back(summarize(exp.densities[c], column));
    }
    std::sort(rows.begin(), rows.end(), [](const RateRow& a, const RateRow& b) { return a.n < b.n; });
    return rows;
}

}  // namespace orthant
