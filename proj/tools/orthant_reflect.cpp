// orthant-reflect: command-line front end for the orthant reflection library.
//
// Exit status: 0 when every asserted check passes, 1 when a check fails,
// 2 for usage or configuration errors.

#include "orthant/error.hpp"
#include "orthant/io.hpp"
#include "orthant/projection.hpp"
#include "orthant/scenario.hpp"
#include "orthant/sde.hpp"
#include "orthant/skorokhod.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace orthant;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::uint64_t default_seed() { return seed_from_environment().value_or(20240521); }

// Writes to `file`, or stdout when empty.
template <typename Fn>
void emit(const std::string& file, Fn&& write) {
    if (file.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigParse, "cannot write " + file);
    write(out);
}

std::vector<std::size_t> parse_density_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (double v : parse_point(text)) {
        if (v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw Error(ErrorCode::ConfigParse, "densities must be positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

int run_project(const std::string& matrix, const std::string& point, double tol) {
    const auto q = read_matrix_file(matrix);
    const auto res = project_fixed_point(q, parse_point(point), tol);
    const std::size_t d = q.dim();
    for (std::size_t j = 0; j < d; ++j) std::cout << "pi" << j + 1 << ',';
    for (std::size_t j = 0; j < d; ++j) std::cout << "r_bar" << j + 1 << ',';
    std::cout << "iterations,residual\n";
    for (double v : res.pi) std::cout << format_double(v) << ',';
    for (double v : res.r_bar) std::cout << format_double(v) << ',';
    std::cout << res.iterations << ',' << format_double(res.residual) << '\n';
    return kPass;
}

// The grid path read as a step function jumping at every grid point.
StepFunction as_step_function(const GridPath& y) {
    std::vector<double> times;
    std::vector<Vec> values;
    for (std::size_t i = 0; i < y.size(); ++i) {
        times.push_back(y.time(i));
        values.emplace_back(y[i].begin(), y[i].end());
    }
    return {std::move(times), std::move(values)};
}

int verify_solution(const ReflectionMatrix& q, const GridPath& y, const SkorokhodSolution& s) {
    struct Line {
        std::string name;
        double value;
        double limit;
    };
    double monotone = 0.0;
    for (std::size_t i = 1; i < s.k.size(); ++i)
        for (std::size_t j = 0; j < s.k.dim(); ++j) monotone = std::max(monotone, s.k[i - 1][j] - s.k[i][j]);
    double k_bound = 0.0;
    double running = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        running = std::max(running, sup_norm(y[i]));
        k_bound = std::max(k_bound, sup_norm(s.k[i]) - stability_regulator_constant(q) * running);
    }
    const double scale = 1.0 + sup_norm(y.data());
    const std::vector<Line> lines{
        {"reconstruction x = y + (I - Q^T) k", reconstruction_residual(q, y, s), 1e-12 * scale},
        {"k nondecreasing (max decrease)", monotone, 0.0},
        {"k_0 = 0", sup_norm(s.k[0]), 0.0},
        {"scheme forms agree", scheme_form_discrepancy(q, y), 1e-12},
        {"fixed-point form of the scheme", fixed_point_form_residual(q, y, fast_scheme(q, y).k), 1e-12 * scale},
        {"|k^n_t| - sup|y|/(1 - q) <= 0", k_bound, 1e-12 * scale},
    };
    bool ok = true;
    for (const auto& l : lines) {
        const bool pass = l.value <= l.limit;
        ok = ok && pass;
        std::cerr << (pass ? "PASS " : "FAIL ") << l.name << ": " << format_double(l.value) << " (limit "
                  << format_double(l.limit) << ")\n";
    }
    return ok ? kPass : kFail;
}

int run_skorokhod(const std::string& matrix, const std::string& path_file, const std::string& oracle,
                  const std::string& out, bool verify) {
    const auto q = read_matrix_file(matrix);
    const auto y = read_path_csv_file(path_file);
    SkorokhodSolution s = [&] {
        if (oracle == "fast") return fast_scheme(q, y);
        if (oracle == "fixed-point") return fixed_point_oracle(q, y);
        const auto exact = step_function_exact(q, as_step_function(y));
        return SkorokhodSolution{discretize(exact.x, y.density(), y.horizon()),
                                 discretize(exact.k, y.density(), y.horizon())};
    }();
    emit(out, [&](std::ostream& os) { write_solution_csv(os, s); });
    return verify ? verify_solution(q, y, s) : kPass;
}

int run_simulate(const std::string& model_name, std::size_t n, std::size_t n_max, std::uint64_t seed, double horizon,
                 const std::string& out) {
    const auto named = model_by_name(model_name);
    const auto w = generate_wiener({seed, n_max, named.model.dim(), horizon});
    const auto path = fast_euler_diffusion(named.q, named.model, w, n);
    emit(out, [&](std::ostream& os) { write_solution_csv(os, path.solution); });
    return kPass;
}

int run_rate(const std::string& model_name, unsigned p, std::size_t paths, std::size_t n_max,
             const std::string& densities, std::uint64_t seed, double horizon, unsigned threads,
             const std::string& out) {
    const auto named = model_by_name(model_name);
    RateExperiment exp;
    exp.wiener = {seed, n_max, named.model.dim(), horizon};
    exp.densities = parse_density_list(densities);
    exp.p = p;
    exp.paths = paths;
    exp.threads = threads;
    const auto report = strong_error(named.q, named.model, exp);
    emit(out, [&](std::ostream& os) { write_rate_csv(os, report); });
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fast reflection schemes on the nonnegative orthant"};
    app.require_subcommand(1);

    std::string matrix;
    std::string point;
    double tol = kDefaultTolerance;
    auto* project = app.add_subcommand("project", "Project a point onto the orthant along (I - Q^T)");
    project->add_option("--matrix", matrix, "Matrix file (first line d, then d rows)")->required();
    project->add_option("--point", point, "Point as v1,...,vd")->required();
    project->add_option("--tol", tol, "Fixed-point tolerance")->check(CLI::PositiveNumber);

    std::string path_file;
    std::string oracle = "fast";
    std::string out;
    bool verify = false;
    auto* skorokhod = app.add_subcommand("skorokhod", "Solve the Skorokhod problem for a grid path");
    skorokhod->add_option("--matrix", matrix, "Matrix file")->required();
    skorokhod->add_option("--path", path_file, "Path CSV (t,x1,...,xd)")->required();
    skorokhod->add_option("--oracle", oracle, "Solver")->check(CLI::IsMember({"fast", "fixed-point", "exact-step"}));
    skorokhod->add_option("--out", out, "Output CSV (default stdout)");
    skorokhod->add_flag("--verify", verify, "Check solution invariants and report on stderr");

    std::string model = "bm-1d";
    std::size_t n = 64;
    std::size_t n_max = 8192;
    std::uint64_t seed = default_seed();
    double horizon = 1.0;
    auto* simulate = app.add_subcommand("simulate", "Simulate one reflected diffusion path");
    simulate->add_option("--model", model, "Model name")->check(CLI::IsMember(model_names()));
    simulate->add_option("--n", n, "Scheme density")->check(CLI::PositiveNumber);
    simulate->add_option("--n-max", n_max, "Wiener grid density")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "Seed (default from ORTHANT_REFLECT_SEED)");
    simulate->add_option("--horizon", horizon, "Time horizon")->check(CLI::PositiveNumber);
    simulate->add_option("--out", out, "Output CSV (default stdout)");

    unsigned p = 1;
    std::size_t paths = 200;
    std::string densities = "16,32,64,128,256,512,1024";
    unsigned threads = 0;
    auto* rate = app.add_subcommand("rate", "Estimate the strong error rate");
    rate->add_option("--model", model, "Model name")->check(CLI::IsMember(model_names()));
    rate->add_option("--p", p, "Moment exponent (error^(2p))")->check(CLI::PositiveNumber);
    rate->add_option("--paths", paths, "Monte Carlo paths");
    rate->add_option("--n-max", n_max, "Reference density")->check(CLI::PositiveNumber);
    rate->add_option("--densities", densities, "Comma list of densities dividing n-max");
    rate->add_option("--seed", seed, "Base seed (default from ORTHANT_REFLECT_SEED)");
    rate->add_option("--horizon", horizon, "Time horizon")->check(CLI::PositiveNumber);
    rate->add_option("--threads", threads, "Worker threads (0 = all cores)");
    rate->add_option("--out", out, "Output CSV (default stdout)");

    std::string name;
    std::string out_dir = "out";
    std::string config;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> scenario_seed;
    auto* scenario = app.add_subcommand("scenario", "Run a built-in scenario and assert its checks");
    scenario->add_option("--name", name, "Scenario name")->required()->check(CLI::IsMember(scenario_names()));
    scenario->add_option("--out", out_dir, "Output directory");
    scenario->add_option("--config", config, "key=value file");
    scenario->add_option("--set", sets, "key=value override (repeatable; beats --config)");
    scenario->add_option("--seed", scenario_seed, "Seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*project) return run_project(matrix, point, tol);
        if (*skorokhod) return run_skorokhod(matrix, path_file, oracle, out, verify);
        if (*simulate) return run_simulate(model, n, n_max, seed, horizon, out);
        if (*rate) return run_rate(model, p, paths, n_max, densities, seed, horizon, threads, out);
        if (*scenario) {
            Scenario s = builtin_scenario(name);
            if (const auto env = seed_from_environment()) s.seed = *env;
            KeyValues kv;
            if (!config.empty()) kv = read_key_values_file(config);
            for (const auto& line : sets) {
                std::istringstream in(line);
                for (auto& [k, v] : read_key_values(in, "--set")) kv[k] = v;
            }
            if (scenario_seed) kv["seed"] = std::to_string(*scenario_seed);
            apply_overrides(s, kv);
            const auto result = run_scenario(s, out_dir);
            print_summary(std::cout, s, result);
            return result.pass() ? kPass : kFail;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::MaxIterExceeded ? kFail : kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
