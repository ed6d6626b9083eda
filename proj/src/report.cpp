#include "orthant/report.hpp"

#include "orthant/error.hpp"

#include <algorithm>
#include <cmath>

namespace orthant {

LogLogFit fit_loglog(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw Error(ErrorCode::DegenerateInput, "need at least two points");
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw Error(ErrorCode::DegenerateInput, "log-log fit needs finite positive coordinates");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    const auto m = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw Error(ErrorCode::DegenerateInput, "all x coordinates coincide");

    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

double rate_abscissa(std::size_t n) {
    const auto x = static_cast<double>(n);
    return std::log(std::log(x) / x);
}

void fit_rate(RateReport& report) {
    std::sort(report.rows.begin(), report.rows.end(), [](const RateRow& a, const RateRow& b) { return a.n < b.n; });
    std::vector<std::pair<double, double>> points;
    for (const auto& row : report.rows) {
        if (row.mean > 0.0 && row.n > 1) {
            const auto x = static_cast<double>(row.n);
            points.emplace_back(std::log(x) / x, row.mean);
        }
    }
    report.fit.reset();
    if (points.size() < 2) return;
    report.fit = fit_loglog(points);
}

}  // namespace orthant
