#pragma once

#include "orthant/core.hpp"
#include "orthant/io.hpp"
#include "orthant/sde.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace orthant {

/// Symmetric 2 x 2 Q with both off-diagonal entries 1/2.
ReflectionMatrix jump_example_matrix();

/// y = 0 on [0, 1) and (-1, -1) from t = 1 on.
StepFunction jump_example_input();

/// d = 2 unit-speed input (sin 2 pi t, cos 2 pi t - 1/2) / (2 pi); y_0 = (0, 1/(4 pi)).
Vec continuous_sine(double t);

/// Random valid Q of dimension d whose larger max row/column sum equals max_norm (< 1).
ReflectionMatrix random_reflection_matrix(std::mt19937_64& rng, std::size_t d, double max_norm);

struct NamedModel {
    std::string name;
    ReflectionMatrix q;
    DiffusionModel model;
};

/// "bm-1d": reflected Brownian motion on [0, inf) from 0.
/// "diffusion-2d": b(x) = 1 - x, sigma = 0.5 I, X_0 = (1, 1) with the example Q.
/// Throws UnknownScenario for anything else.
NamedModel model_by_name(const std::string& name);
std::vector<std::string> model_names();

enum class ScenarioKind { JumpExample, StepRandom, ContinuousSine, Rate };

struct Scenario {
    std::string name;
    ScenarioKind kind = ScenarioKind::JumpExample;
    std::string model;  ///< for Rate scenarios
    std::vector<std::size_t> densities;
    double horizon = 1.0;
    unsigned p = 1;
    std::size_t paths = 200;
    std::size_t n_max = 8192;
    std::uint64_t seed = 20240521;
    unsigned threads = 0;
    ErrorGrid error_grid = ErrorGrid::FinePoints;
    /// Inclusive acceptance window for the fitted slope (Rate scenarios).
    double slope_lo = 0.0;
    double slope_hi = 0.0;
    double min_r_squared = 0.0;
    /// Monte Carlo paths for the moment check (diffusion-2d-rate only; 0 disables).
    std::size_t moment_paths = 0;
    std::vector<std::size_t> moment_densities;

    /// Throws ConfigParse when a field is out of range.
    void validate() const;
};

/// Built-ins: paper-example, step-random, continuous-sine, bm-1d-rate, diffusion-2d-rate.
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> scenario_names();

/// Overrides from key=value pairs: seed, paths, p, n_max, densities
/// (comma list), horizon, threads, moment_paths, error_grid (shared|fine).
void apply_overrides(Scenario& s, const KeyValues& kv);

/// Seed from ORTHANT_REFLECT_SEED when set and parseable.
std::optional<std::uint64_t> seed_from_environment();

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ScenarioResult {
    std::vector<Check> checks;
    std::vector<std::filesystem::path> files;
    bool pass() const;
};

/// Runs the scenario, writes CSV artifacts into out_dir (created if missing)
/// and returns one entry per asserted property. Data files carry no timestamps.
ScenarioResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir);

void print_summary(std::ostream& out, const Scenario& s, const ScenarioResult& r);

}  // namespace orthant
