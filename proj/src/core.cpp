#include "orthant/core.hpp"

#include "orthant/error.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace orthant {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::NormNotSubunit: return "NormNotSubunit";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ZeroDensity: return "ZeroDensity";
    case ErrorCode::NonpositiveHorizon: return "NonpositiveHorizon";
    case ErrorCode::DensityMismatch: return "DensityMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::StartOutsideOrthant: return "StartOutsideOrthant";
    case ErrorCode::NonFiniteCoefficient: return "NonFiniteCoefficient";
    case ErrorCode::NotADivisor: return "NotADivisor";
    case ErrorCode::InsufficientPaths: return "InsufficientPaths";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::ConfigParse: return "ConfigParse";
    }
    return "Unknown";
}

ReflectionMatrix ReflectionMatrix::validate(const std::vector<std::vector<double>>& rows) {
    const std::size_t d = rows.size();
    if (d == 0) throw Error(ErrorCode::NotSquare, "matrix is empty");

    ReflectionMatrix m;
    m.d_ = d;
    m.q_.assign(d * d, 0.0);
    std::vector<double> col_sums(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d) {
            std::ostringstream os;
            os << "row " << i << " has " << rows[i].size() << " entries, expected " << d;
            throw Error(ErrorCode::NotSquare, os.str());
        }
        double row_sum = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double v = rows[i][j];
            std::ostringstream where;
            where << "entry (" << i << ", " << j << ") = " << v;
            if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, where.str());
            if (v < 0.0) throw Error(ErrorCode::NegativeEntry, where.str());
            if (i == j && v != 0.0) throw Error(ErrorCode::NonzeroDiagonal, where.str());
            m.q_[i * d + j] = v;
            row_sum += v;
            col_sums[j] += v;
        }
        m.row_norm_ = std::max(m.row_norm_, row_sum);
    }
    m.col_norm_ = *std::max_element(col_sums.begin(), col_sums.end());

    if (m.row_norm_ >= 1.0) {
        std::ostringstream os;
        os << "row norm (max row sum) = " << m.row_norm_ << " must be < 1";
        throw Error(ErrorCode::NormNotSubunit, os.str());
    }
    if (m.col_norm_ >= 1.0) {
        std::ostringstream os;
        os << "column norm (max column sum) = " << m.col_norm_ << " must be < 1";
        throw Error(ErrorCode::NormNotSubunit, os.str());
    }
    return m;
}

void ReflectionMatrix::apply_transpose(std::span<const double> u, std::span<double> out) const noexcept {
    assert(u.size() == d_ && out.size() == d_);
    for (std::size_t j = 0; j < d_; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d_; ++i) acc += q_[i * d_ + j] * u[i];
        out[j] = acc;
    }
}

Vec ReflectionMatrix::apply_transpose(std::span<const double> u) const {
    Vec out(d_);
    apply_transpose(u, out);
    return out;
}

void ReflectionMatrix::apply_reflection(std::span<const double> u, std::span<double> out) const noexcept {
    assert(u.size() == d_ && out.size() == d_);
    for (std::size_t j = 0; j < d_; ++j) {
        double acc = u[j];
        for (std::size_t i = 0; i < d_; ++i) acc -= q_[i * d_ + j] * u[i];
        out[j] = acc;
    }
}

Vec ReflectionMatrix::apply_reflection(std::span<const double> u) const {
    Vec out(d_);
    apply_reflection(u, out);
    return out;
}

Vec positive_part(std::span<const double> z) {
    Vec out(z.size());
    std::transform(z.begin(), z.end(), out.begin(), [](double v) { return std::max(v, 0.0); });
    return out;
}

double sup_norm(std::span<const double> z) noexcept {
    double m = 0.0;
    for (double v : z) m = std::max(m, std::abs(v));
    return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) noexcept {
    assert(a.size() == b.size());
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

bool in_orthant(std::span<const double> z, double tol) noexcept {
    return std::all_of(z.begin(), z.end(), [tol](double v) { return v >= -tol; });
}

bool all_finite(std::span<const double> z) noexcept {
    return std::all_of(z.begin(), z.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace orthant
