#include "orthant/skorokhod.hpp"

#include "orthant/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orthant {

namespace {

void require_match(const ReflectionMatrix& q, const GridPath& y) {
    if (y.dim() != q.dim()) {
        std::ostringstream os;
        os << "path dimension " << y.dim() << " vs matrix dimension " << q.dim();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

void require_start_in_orthant(std::span<const double> y0) {
    if (!in_orthant(y0)) throw Error(ErrorCode::StartOutsideOrthant, "y_0 must lie in the orthant");
}

double path_scale(const GridPath& y) { return sup_norm(y.data()); }

SkorokhodSolution increment_form(const ReflectionMatrix& q, const GridPath& y) {
    const std::size_t d = y.dim();
    std::vector<double> xs(y.data().size());
    std::vector<double> ks(y.data().size(), 0.0);
    Vec x(y[0].begin(), y[0].end());
    Vec k(d, 0.0);
    Vec dy(d);
    Vec scratch(d);
    std::copy(x.begin(), x.end(), xs.begin());
    for (std::size_t i = 1; i < y.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) dy[j] = y[i][j] - y[i - 1][j];
        fast_step(q, x, k, dy, scratch);
        std::copy(x.begin(), x.end(), xs.begin() + static_cast<std::ptrdiff_t>(i * d));
        std::copy(k.begin(), k.end(), ks.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    return {GridPath(y.density(), y.horizon(), d, std::move(xs)),
            GridPath(y.density(), y.horizon(), d, std::move(ks))};
}

SkorokhodSolution regulator_form(const ReflectionMatrix& q, const GridPath& y) {
    const std::size_t d = y.dim();
    std::vector<double> xs(y.data().size());
    std::vector<double> ks(y.data().size(), 0.0);
    Vec k(d, 0.0);
    Vec qk(d);
    Vec push(d);
    std::copy_n(y.data().begin(), d, xs.begin());
    for (std::size_t i = 1; i < y.size(); ++i) {
        q.apply_transpose(k, qk);
        for (std::size_t j = 0; j < d; ++j) k[j] = std::max(std::max(qk[j] - y[i][j], 0.0), k[j]);
        q.apply_reflection(k, push);
        for (std::size_t j = 0; j < d; ++j) {
            xs[i * d + j] = y[i][j] + push[j];
            ks[i * d + j] = k[j];
        }
    }
    return {GridPath(y.density(), y.horizon(), d, std::move(xs)),
            GridPath(y.density(), y.horizon(), d, std::move(ks))};
}

// F(u)_i = max_{j<=i} [Q^T u_j - y_j]^+
std::vector<double> running_sup_map(const ReflectionMatrix& q, const GridPath& y, const GridPath& u) {
    const std::size_t d = y.dim();
    std::vector<double> out(y.data().size());
    Vec acc(d, 0.0);
    Vec qu(d);
    for (std::size_t i = 0; i < y.size(); ++i) {
        q.apply_transpose(u[i], qu);
        for (std::size_t j = 0; j < d; ++j) {
            acc[j] = std::max(acc[j], qu[j] - y[i][j]);
            out[i * d + j] = acc[j];
        }
    }
    return out;
}

GridPath reconstruct_x(const ReflectionMatrix& q, const GridPath& y, const GridPath& k) {
    const std::size_t d = y.dim();
    std::vector<double> xs(y.data().size());
    Vec push(d);
    for (std::size_t i = 0; i < y.size(); ++i) {
        q.apply_reflection(k[i], push);
        for (std::size_t j = 0; j < d; ++j) xs[i * d + j] = y[i][j] + push[j];
    }
    return {y.density(), y.horizon(), d, std::move(xs)};
}

// Rounding slack for bounds that can hold with equality.
bool within(double lhs, double rhs) { return lhs <= rhs * (1.0 + 1e-12) + 1e-15; }

}  // namespace

void fast_step(const ReflectionMatrix& q, std::span<double> x, std::span<double> k,
               std::span<const double> dy, std::span<double> scratch) noexcept {
    const std::size_t d = x.size();
    for (std::size_t j = 0; j < d; ++j) {
        x[j] += dy[j];
        scratch[j] = std::max(-x[j], 0.0);
        k[j] += scratch[j];
    }
    // x += (I - Q^T) push, expanded so no second buffer is needed
    for (std::size_t j = 0; j < d; ++j) {
        double acc = scratch[j];
        for (std::size_t i = 0; i < d; ++i) acc -= q(i, j) * scratch[i];
        x[j] += acc;
    }
}

SkorokhodSolution fast_scheme(const ReflectionMatrix& q, const GridPath& y, SchemeForm form) {
    require_match(q, y);
    require_start_in_orthant(y[0]);
    return form == SchemeForm::Increment ? increment_form(q, y) : regulator_form(q, y);
}

double scheme_form_discrepancy(const ReflectionMatrix& q, const GridPath& y) {
    const auto a = fast_scheme(q, y, SchemeForm::Increment);
    const auto b = fast_scheme(q, y, SchemeForm::Regulator);
    const double t = y.horizon();
    return std::max(sup_distance(a.x, b.x, t), sup_distance(a.k, b.k, t)) / (1.0 + path_scale(y));
}

double fixed_point_form_residual(const ReflectionMatrix& q, const GridPath& y, const GridPath& k) {
    require_match(q, y);
    const GridPath image(y.density(), y.horizon(), y.dim(), running_sup_map(q, y, delay_one_step(k)));
    return sup_distance(image, k, y.horizon());
}

double reconstruction_residual(const ReflectionMatrix& q, const GridPath& y, const SkorokhodSolution& s) {
    require_match(q, y);
    return sup_distance(reconstruct_x(q, y, s.k), s.x, y.horizon());
}

SkorokhodSolution fixed_point_oracle(const ReflectionMatrix& q, const GridPath& y, double tol,
                                     std::optional<std::size_t> max_iter) {
    require_match(q, y);
    require_start_in_orthant(y[0]);
    if (!(tol > 0.0)) throw Error(ErrorCode::DegenerateInput, "tolerance must be positive");

    const Vec scale{path_scale(y)};
    const std::size_t budget = max_iter.value_or(default_max_iter(q, scale, tol));
    const double stop = tol * (1.0 - q.col_norm());

    GridPath k = GridPath::constant(y.density(), y.horizon(), Vec(y.dim(), 0.0));
    for (std::size_t it = 0;; ++it) {
        if (it == budget) {
            std::ostringstream os;
            os << "Picard iteration did not reach tol " << tol << " within " << budget << " sweeps";
            throw Error(ErrorCode::MaxIterExceeded, os.str());
        }
        GridPath next(y.density(), y.horizon(), y.dim(), running_sup_map(q, y, k));
        const double step = sup_distance(next, k, y.horizon());
        k = std::move(next);
        if (step <= stop) break;
    }
    GridPath x = reconstruct_x(q, y, k);
    return {std::move(x), std::move(k)};
}

StepSolution step_function_exact(const ReflectionMatrix& q, const StepFunction& y, double tol) {
    const std::size_t d = y.dim();
    if (d != q.dim()) throw Error(ErrorCode::DimensionMismatch, "step function dimension differs from Q");
    const auto& values = y.values();
    require_start_in_orthant(values.front());

    std::vector<Vec> xs{values.front()};
    std::vector<Vec> ks{Vec(d, 0.0)};
    for (std::size_t i = 1; i < values.size(); ++i) {
        Vec z = xs.back();
        for (std::size_t j = 0; j < d; ++j) z[j] += values[i][j] - values[i - 1][j];
        auto proj = project_fixed_point(q, z, tol);
        Vec k = ks.back();
        for (std::size_t j = 0; j < d; ++j) k[j] += proj.r_bar[j];
        xs.push_back(std::move(proj.pi));
        ks.push_back(std::move(k));
    }
    return {StepFunction(y.times(), std::move(xs)), StepFunction(y.times(), std::move(ks))};
}

double approximation_constant(const ReflectionMatrix& q) noexcept {
    const double c = q.col_norm();
    const double regulator = 1.0 / ((1.0 - c) * (1.0 - c));
    return regulator + 1.0 + (1.0 + c) * regulator;
}

double stability_regulator_constant(const ReflectionMatrix& q) noexcept { return 1.0 / (1.0 - q.col_norm()); }

double stability_combined_constant(const ReflectionMatrix& q) noexcept { return 3.0 / (1.0 - q.col_norm()); }

BoundReport check_theorem3(const ReflectionMatrix& q, const GridPath& y_ref, std::size_t n,
                           const SkorokhodSolution& reference, double t) {
    require_match(q, y_ref);
    if (reference.x.density() != y_ref.density() || reference.k.density() != y_ref.density()) {
        throw Error(ErrorCode::DensityMismatch, "reference must live on the grid of y_ref");
    }
    const GridPath coarse = subsample(y_ref, n);
    const auto approx = fast_scheme(q, coarse);
    const std::size_t factor = y_ref.density() / n;
    const GridPath x_fine = truncate(refine(approx.x, factor), y_ref.horizon());
    const GridPath k_fine = truncate(refine(approx.k, factor), y_ref.horizon());

    BoundReport r;
    r.lhs = sup_distance(x_fine, reference.x, t) + sup_distance(k_fine, reference.k, t);
    r.constant = approximation_constant(q);
    r.scale = modulus_of_continuity(y_ref, 1.0 / static_cast<double>(n), t);
    r.rhs = r.constant * r.scale;
    r.pass = within(r.lhs, r.rhs);
    return r;
}

StabilityReport check_theorem4(const ReflectionMatrix& q, const GridPath& y1, const GridPath& y2, double t) {
    const double input = sup_distance(y1, y2, t);
    const auto s1 = fast_scheme(q, y1);
    const auto s2 = fast_scheme(q, y2);
    const double dk = sup_distance(s1.k, s2.k, t);
    const double dx = sup_distance(s1.x, s2.x, t);

    StabilityReport out;
    out.regulator.lhs = dk;
    out.regulator.constant = stability_regulator_constant(q);
    out.regulator.scale = input;
    out.regulator.rhs = out.regulator.constant * input;
    out.regulator.pass = within(dk, out.regulator.rhs);

    out.combined.lhs = dk + dx;
    out.combined.constant = stability_combined_constant(q);
    out.combined.scale = input;
    out.combined.rhs = out.combined.constant * input;
    out.combined.pass = within(out.combined.lhs, out.combined.rhs);
    return out;
}

}  // namespace orthant
