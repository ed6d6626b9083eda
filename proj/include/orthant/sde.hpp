#pragma once

#include "orthant/core.hpp"
#include "orthant/paths.hpp"
#include "orthant/report.hpp"
#include "orthant/skorokhod.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace orthant {

/// Writes f(x) into `out`. Drift fields fill d entries, diffusion fields fill a
/// row-major d x d matrix.
using Field = std::function<void(std::span<const double> x, std::span<double> out)>;

/// dX = b(X) dt + sigma(X) dW + (I - Q^T) dK on the orthant.
struct DiffusionModel {
    Vec x0;
    Field drift;
    Field diffusion;
    /// Documented Lipschitz constant of b and sigma; reporting only.
    double lipschitz_hint = 0.0;

    std::size_t dim() const noexcept { return x0.size(); }
    /// Throws StartOutsideOrthant, NonFinite, or DegenerateInput (missing field).
    void validate() const;
};

/// Increments Z_{(i+1)/n} - Z_{i/n} of a driver on the grid of density n.
class DriverStream {
public:
    DriverStream(std::size_t density, double horizon, std::size_t dim, std::vector<double> increments);

    std::size_t density() const noexcept { return n_; }
    double horizon() const noexcept { return horizon_; }
    std::size_t dim() const noexcept { return d_; }
    std::size_t size() const noexcept { return increments_.size() / d_; }
    std::span<const double> operator[](std::size_t i) const noexcept {
        return {increments_.data() + i * d_, d_};
    }

private:
    std::size_t n_;
    double horizon_;
    std::size_t d_;
    std::vector<double> increments_;
};

struct WienerConfig {
    std::uint64_t seed = 0;
    std::size_t n_max = 1;
    std::size_t dim = 1;
    double horizon = 1.0;
};

/// W on the grid of density n_max with W_0 = 0. Increments are N(0, 1/n_max)
/// per component, drawn from std::mt19937_64 seeded with cfg.seed through
/// std::normal_distribution<double>, in time-major then component order.
GridPath generate_wiener(const WienerConfig& cfg);

/// Increments of w on the coarser grid of density n; n must divide w.density().
DriverStream coarsen(const GridPath& w, std::size_t density);

/// Increments of z on its own grid.
DriverStream increments(const GridPath& z);

/// Scheme output together with the accumulated input Y^n, so that
/// X^n = Y^n + (I - Q^T) K^n at every grid point.
struct SdePath {
    SkorokhodSolution solution;
    GridPath input;
};

/// Y increment sigma(X^n_i) (Z_{i+1} - Z_i), then one fast reflection step.
SdePath fast_euler_semimartingale(const ReflectionMatrix& q, std::span<const double> x0, const Field& sigma,
                                  const DriverStream& driver, SchemeForm form = SchemeForm::Increment);

/// Y increment b(X^n_i) / n + sigma(X^n_i) (W_{(i+1)/n} - W_{i/n}) with the
/// Wiener increments aggregated from w, then one fast reflection step.
SdePath fast_euler_diffusion(const ReflectionMatrix& q, const DiffusionModel& model, const GridPath& w,
                             std::size_t density, SchemeForm form = SchemeForm::Increment);

/// Where scheme and reference are compared.
enum class ErrorGrid {
    /// Coarse grid points i/n only.
    SharedPoints,
    /// Every fine grid point, holding the coarse path constant between its own points.
    FinePoints,
};

struct RateExperiment {
    WienerConfig wiener;
    std::vector<std::size_t> densities;
    unsigned p = 1;
    std::size_t paths = 2;
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
    ErrorGrid grid = ErrorGrid::SharedPoints;
};

/// Monte Carlo estimate of E sup |X^n - X^{n_max}|^{2p} with coupled
/// increments; path m uses seed wiener.seed + m.
RateReport strong_error(const ReflectionMatrix& q, const DiffusionModel& model, const RateExperiment& exp);

/// Monte Carlo estimate of E sup_{s<=T} |X^n_s|^2 for each density, reusing
/// the coupling and seeding of strong_error. Rows carry n, h, mean, std_error.
std::vector<RateRow> sup_second_moment(const ReflectionMatrix& q, const DiffusionModel& model,
                                       const RateExperiment& exp);

}  // namespace orthant
