#include "orthant/projection.hpp"

#include "orthant/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orthant {

namespace {

// out = [Q^T r - z]^+
void regulator_step(const ReflectionMatrix& q, std::span<const double> r, std::span<const double> z,
                    std::span<double> out) {
    q.apply_transpose(r, out);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::max(out[j] - z[j], 0.0);
}

}  // namespace

std::size_t default_max_iter(const ReflectionMatrix& q, std::span<const double> z, double tol) {
    constexpr std::size_t kSlack = 16;
    const double rate = q.col_norm();
    if (rate <= 0.0) return 1 + kSlack;
    // The regulator starts at distance <= |z| / (1 - q) from the fixed point and
    // the stopping test asks for an increment below tol * (1 - q).
    const double ratio = tol * (1.0 - rate) * (1.0 - rate) / (1.0 + sup_norm(z));
    const double steps = std::ceil(std::log(ratio) / std::log(rate));
    return static_cast<std::size_t>(std::max(steps, 0.0)) + kSlack;
}

ProjectionResult project_fixed_point(const ReflectionMatrix& q, std::span<const double> z, double tol,
                                     std::optional<std::size_t> max_iter) {
    const std::size_t d = q.dim();
    if (z.size() != d) throw Error(ErrorCode::DimensionMismatch, "point dimension differs from Q");
    if (!all_finite(z)) throw Error(ErrorCode::NonFinite, "point contains NaN or Inf");
    if (!(tol > 0.0)) throw Error(ErrorCode::DegenerateInput, "tolerance must be positive");

    const std::size_t budget = max_iter.value_or(default_max_iter(q, z, tol));
    const double stop = tol * (1.0 - q.col_norm());

    Vec r(d, 0.0);
    Vec next(d);
    std::size_t iterations = 0;
    for (;;) {
        if (iterations == budget) {
            std::ostringstream os;
            os << "no convergence to tol " << tol << " within " << budget << " iterations";
            throw Error(ErrorCode::MaxIterExceeded, os.str());
        }
        regulator_step(q, r, z, next);
        ++iterations;
        const double step = sup_distance(next, r);
        r.swap(next);
        if (step <= stop) break;
    }

    ProjectionResult out;
    out.z_in.assign(z.begin(), z.end());
    out.r_bar = r;
    out.pi = q.apply_reflection(r);
    for (std::size_t j = 0; j < d; ++j) out.pi[j] += z[j];
    regulator_step(q, r, z, next);
    out.residual = sup_distance(r, next);
    out.iterations = iterations;
    return out;
}

std::vector<Vec> z_sequence(const ReflectionMatrix& q, std::span<const double> z, std::size_t steps) {
    std::vector<Vec> seq;
    seq.reserve(steps + 1);
    seq.emplace_back(z.begin(), z.end());
    Vec push(z.size());
    for (std::size_t m = 0; m < steps; ++m) {
        Vec next = seq.back();
        for (std::size_t j = 0; j < next.size(); ++j) next[j] = std::max(-next[j], 0.0);
        q.apply_reflection(next, push);
        next = seq.back();
        for (std::size_t j = 0; j < next.size(); ++j) next[j] += push[j];
        seq.push_back(std::move(next));
    }
    return seq;
}

std::vector<Vec> z_sequence_cumulative(const ReflectionMatrix& q, std::span<const double> z,
                                       std::size_t steps) {
    std::vector<Vec> seq;
    seq.reserve(steps + 1);
    seq.emplace_back(z.begin(), z.end());
    Vec total(z.size(), 0.0);
    for (std::size_t m = 0; m < steps; ++m) {
        const Vec& prev = seq.back();
        for (std::size_t j = 0; j < total.size(); ++j) total[j] += std::max(-prev[j], 0.0);
        Vec next = q.apply_reflection(total);
        for (std::size_t j = 0; j < next.size(); ++j) next[j] += z[j];
        seq.push_back(std::move(next));
    }
    return seq;
}

std::vector<Vec> zbar_sequence(const ReflectionMatrix& q, std::span<const double> z, std::size_t steps) {
    const std::size_t d = z.size();
    std::vector<Vec> seq;
    seq.reserve(steps + 1);
    seq.emplace_back(z.begin(), z.end());
    Vec r(d, 0.0);
    Vec next(d);
    for (std::size_t m = 0; m < steps; ++m) {
        regulator_step(q, r, z, next);
        r.swap(next);
        Vec zbar = q.apply_reflection(r);
        for (std::size_t j = 0; j < d; ++j) zbar[j] += z[j];
        seq.push_back(std::move(zbar));
    }
    return seq;
}

double verify_lemma1(const ReflectionMatrix& q, std::span<const double> z, std::size_t steps) {
    const auto a = z_sequence(q, z, steps);
    const auto b = zbar_sequence(q, z, steps);
    double worst = 0.0;
    for (std::size_t m = 0; m <= steps; ++m) worst = std::max(worst, sup_distance(a[m], b[m]));
    return worst;
}

}  // namespace orthant
