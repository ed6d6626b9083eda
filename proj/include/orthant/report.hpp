#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace orthant {

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares of log y on log x. Needs two distinct positive x and
/// positive y; throws DegenerateInput otherwise.
LogLogFit fit_loglog(std::span<const std::pair<double, double>> points);

/// Monte Carlo estimate at one grid density.
struct RateRow {
    std::size_t n = 0;
    double h = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
};

/// Strong-error estimates against the rate variable (ln n) / n. Rows are sorted
/// by n; the fit skips zero-error rows and is empty when fewer than two remain.
struct RateReport {
    std::vector<RateRow> rows;
    std::optional<LogLogFit> fit;
    unsigned p = 1;
    std::size_t paths = 0;
};

/// log((ln n) / n)
double rate_abscissa(std::size_t n);

/// Fills report.fit from report.rows.
void fit_rate(RateReport& report);

}  // namespace orthant
