#pragma once

#include "orthant/core.hpp"
#include "orthant/paths.hpp"
#include "orthant/projection.hpp"

#include <optional>
#include <span>

namespace orthant {

/// Grid pair (x, k) with x = y + (I - Q^T) k. Scheme iterates may leave the
/// orthant; only exact solutions are confined to it.
struct SkorokhodSolution {
    GridPath x;
    GridPath k;
};

/// Which recursion drives the fast scheme. Both produce the same (x, k) in
/// exact arithmetic.
enum class SchemeForm {
    /// x += dy + (I - Q^T)[-(x + dy)]^+, k += [-(x + dy)]^+
    Increment,
    /// k' = [Q^T k - y']^+ v k, x' = y' + (I - Q^T) k'
    Regulator,
};

/// One fast step in increment form. `scratch` must have dim() entries.
void fast_step(const ReflectionMatrix& q, std::span<double> x, std::span<double> k,
               std::span<const double> dy, std::span<double> scratch) noexcept;

/// One positive-part correction per grid step; x^n_0 = y_0, k^n_0 = 0.
/// Throws StartOutsideOrthant unless y_0 >= 0.
SkorokhodSolution fast_scheme(const ReflectionMatrix& q, const GridPath& y,
                              SchemeForm form = SchemeForm::Increment);

/// max |difference| between the two scheme forms, relative to 1 + sup|y|.
double scheme_form_discrepancy(const ReflectionMatrix& q, const GridPath& y);

/// sup_i |F^n(k^{(n-)})_i - k_i| with F^n(u)_i = max_{j<=i} [Q^T u_j - y_j]^+.
double fixed_point_form_residual(const ReflectionMatrix& q, const GridPath& y, const GridPath& k);

/// sup_i |x_i - y_i - (I - Q^T) k_i|
double reconstruction_residual(const ReflectionMatrix& q, const GridPath& y, const SkorokhodSolution& s);

/// Exact Skorokhod solution of the step path y by Picard iteration of
/// k <- sup_{s<=t} [Q^T k_s - y_s]^+ from k = 0. The result is within tol of
/// the fixed point in sup norm.
SkorokhodSolution fixed_point_oracle(const ReflectionMatrix& q, const GridPath& y,
                                     double tol = kDefaultTolerance,
                                     std::optional<std::size_t> max_iter = std::nullopt);

struct StepSolution {
    StepFunction x;
    StepFunction k;
};

/// x jumps to Pi_Q(x_prev + dy) at each jump of y; k accumulates the regulators.
StepSolution step_function_exact(const ReflectionMatrix& q, const StepFunction& y,
                                 double tol = kDefaultTolerance);

struct BoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
    /// modulus of continuity or input distance the constant multiplies
    double scale = 0.0;
    bool pass = false;
};

/// Constant in |x^n - x| + |k^n - k| <= C w_{1/n}(y): the regulator part is
/// bounded by w / (1 - q)^2 and |x^n - x| <= w + (1 + q)|k^n - k|, with q = col_norm(Q).
double approximation_constant(const ReflectionMatrix& q) noexcept;

/// 1 / (1 - q)
double stability_regulator_constant(const ReflectionMatrix& q) noexcept;

/// Constant for |k1 - k2| + |x1 - x2| <= C |y1 - y2|, i.e. 3 / (1 - q).
double stability_combined_constant(const ReflectionMatrix& q) noexcept;

/// Runs the fast scheme at density n on y sampled from `y_ref` (whose density
/// must be a multiple of n) and compares against `reference`, the solution on
/// y_ref's grid. The modulus is taken on y_ref at delta = 1/n.
BoundReport check_theorem3(const ReflectionMatrix& q, const GridPath& y_ref, std::size_t n,
                           const SkorokhodSolution& reference, double t);

struct StabilityReport {
    BoundReport regulator;
    BoundReport combined;
};

StabilityReport check_theorem4(const ReflectionMatrix& q, const GridPath& y1, const GridPath& y2, double t);

}  // namespace orthant
