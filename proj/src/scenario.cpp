#include "orthant/scenario.hpp"

#include "orthant/error.hpp"
#include "orthant/projection.hpp"
#include "orthant/skorokhod.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace orthant {

namespace {

std::string fmt(double v) { return format_double(v); }

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigParse, "cannot write " + file.string());
    return out;
}

Check make_check(std::string name, bool pass, std::string detail) {
    return {std::move(name), pass, std::move(detail)};
}

void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorCode::ConfigParse, what);
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    require(ec == std::errc{} && ptr == text.data() + text.size(), key + ": expected a nonnegative integer, got '" + text + "'");
    return v;
}

double parse_positive(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    require(ec == std::errc{} && ptr == text.data() + text.size() && v > 0.0 && std::isfinite(v),
            key + ": expected a positive number, got '" + text + "'");
    return v;
}

std::vector<std::size_t> parse_densities(const std::string& key, const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find(',', start);
        const auto cell = text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
        out.push_back(static_cast<std::size_t>(parse_unsigned(key, cell)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------

ScenarioResult run_jump_example(const Scenario& s, const std::filesystem::path& dir) {
    ScenarioResult r;
    const auto q = jump_example_matrix();
    const auto input = jump_example_input();

    for (std::size_t n : s.densities) {
        const GridPath y = discretize(input, n, s.horizon);
        const auto sol = fast_scheme(q, y);

        double closed_form = 0.0;
        double sup_x = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double k_expected = 0.0;
            double x_expected = 0.0;
            if (i >= n) {
                const auto steps = static_cast<int>(i - n);
                k_expected = 2.0 - std::ldexp(1.0, -steps);
                x_expected = -std::ldexp(1.0, -(steps + 1));
            }
            for (std::size_t j = 0; j < 2; ++j) {
                closed_form = std::max(closed_form, std::abs(sol.k[i][j] - k_expected));
                closed_form = std::max(closed_form, std::abs(sol.x[i][j] - x_expected));
            }
            if (y.time(i) <= 2.0) sup_x = std::max(sup_x, sup_norm(sol.x[i]));
        }
        const std::string tag = "n=" + std::to_string(n);
        r.checks.push_back(make_check("closed-form iterates " + tag, closed_form <= 1e-12,
                                      "max error " + fmt(closed_form)));
        r.checks.push_back(make_check("sup_{t<=2}|x^n - x| = 1/2 " + tag, std::abs(sup_x - 0.5) <= 1e-14,
                                      "sup " + fmt(sup_x)));
        const double fp = fixed_point_form_residual(q, y, sol.k);
        r.checks.push_back(make_check("fixed-point form " + tag, fp <= 1e-12, "residual " + fmt(fp)));
        const double forms = scheme_form_discrepancy(q, y);
        r.checks.push_back(make_check("scheme forms agree " + tag, forms <= 1e-14, "discrepancy " + fmt(forms)));

        const auto path = dir / ("paper-example-n" + std::to_string(n) + ".csv");
        auto out = open_out(path);
        write_solution_csv(out, sol);
        r.files.push_back(path);
    }

    const auto exact = step_function_exact(q, input);
    const auto k_after = exact.k(1.0);
    const auto x_after = exact.x(1.0);
    const double exact_err = std::max(sup_distance(k_after, Vec{2.0, 2.0}), sup_norm(x_after));
    r.checks.push_back(make_check("exact solution x = 0, k = (2,2)", exact_err <= 1e-12, "error " + fmt(exact_err)));
    return r;
}

// ---------------------------------------------------------------------------

StepFunction random_step_input(std::mt19937_64& rng, std::size_t d, std::size_t jumps, std::size_t grid,
                               double horizon) {
    std::uniform_real_distribution<double> start(0.0, 1.0);
    std::uniform_real_distribution<double> jump(-1.5, 1.0);
    const auto slots = static_cast<std::size_t>(horizon * static_cast<double>(grid));
    std::vector<std::size_t> at;
    std::uniform_int_distribution<std::size_t> slot(1, slots - 1);
    while (at.size() < jumps) {
        const std::size_t candidate = slot(rng);
        if (std::find(at.begin(), at.end(), candidate) == at.end()) at.push_back(candidate);
    }
    std::sort(at.begin(), at.end());
    std::vector<double> times{0.0};
    std::vector<Vec> values;
    Vec v(d);
    for (auto& c : v) c = start(rng);
    values.push_back(v);
    for (std::size_t a : at) {
        times.push_back(static_cast<double>(a) / static_cast<double>(grid));
        for (auto& c : v) c += jump(rng);
        values.push_back(v);
    }
    return {std::move(times), std::move(values)};
}

GridPath random_walk_path(std::mt19937_64& rng, std::size_t d, std::size_t n, double horizon) {
    std::normal_distribution<double> step(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
    std::uniform_real_distribution<double> start(0.0, 1.0);
    const std::size_t points = grid_points(n, horizon);
    std::vector<double> values(points * d);
    for (std::size_t j = 0; j < d; ++j) values[j] = start(rng);
    for (std::size_t i = 1; i < points; ++i)
        for (std::size_t j = 0; j < d; ++j) values[i * d + j] = values[(i - 1) * d + j] + step(rng);
    return {n, horizon, d, std::move(values)};
}

ScenarioResult run_step_random(const Scenario& s, const std::filesystem::path& dir) {
    ScenarioResult r;
    std::mt19937_64 rng(s.seed);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    std::uniform_real_distribution<double> norm(0.0, 0.8);
    constexpr std::size_t kGrid = 64;
    constexpr std::size_t kCases = 20;

    const auto path = dir / "step-random.csv";
    auto out = open_out(path);
    out << "case,d,col_norm,oracle_gap,pointwise_err_coarse,pointwise_err_fine,fixed_point_residual\n";

    double worst_gap = 0.0;
    double worst_fine = 0.0;
    double worst_fp = 0.0;
    bool pointwise_decreasing = true;
    const std::size_t coarse = s.densities.front();
    const std::size_t fine = s.densities.back();
    for (std::size_t c = 0; c < kCases; ++c) {
        const std::size_t d = dim(rng);
        const auto q = random_reflection_matrix(rng, d, norm(rng));
        const auto y = random_step_input(rng, d, 3, kGrid, s.horizon);

        const auto exact = step_function_exact(q, y);
        const auto oracle = fixed_point_oracle(q, discretize(y, kGrid, s.horizon));
        double gap = 0.0;
        for (std::size_t i = 0; i < oracle.x.size(); ++i) {
            const double t = oracle.x.time(i);
            gap = std::max({gap, sup_distance(oracle.x[i], exact.x(t)), sup_distance(oracle.k[i], exact.k(t))});
        }

        // midpoints between jumps are continuity points of y
        std::vector<double> probes;
        const auto& times = y.times();
        for (std::size_t i = 1; i < times.size(); ++i) probes.push_back(0.5 * (times[i - 1] + times[i]));
        probes.push_back(0.5 * (times.back() + s.horizon));
        auto pointwise_error = [&](std::size_t n) {
            const auto scheme = fast_scheme(q, discretize(y, n, s.horizon));
            worst_fp = std::max(worst_fp, fixed_point_form_residual(q, discretize(y, n, s.horizon), scheme.k));
            double e = 0.0;
            for (double t : probes) e = std::max(e, sup_distance(scheme.x.at_time(t), exact.x(t)));
            return e;
        };
        const double e_coarse = pointwise_error(coarse);
        const double e_fine = pointwise_error(fine);
        pointwise_decreasing = pointwise_decreasing && e_fine <= e_coarse + 1e-12;
        worst_gap = std::max(worst_gap, gap);
        worst_fine = std::max(worst_fine, e_fine);
        out << c << ',' << d << ',' << fmt(q.col_norm()) << ',' << fmt(gap) << ',' << fmt(e_coarse) << ','
            << fmt(e_fine) << ',' << fmt(worst_fp) << '\n';
    }
    r.files.push_back(path);
    r.checks.push_back(make_check("exact-step vs fixed-point oracle", worst_gap <= 1e-10, "max gap " + fmt(worst_gap)));
    r.checks.push_back(make_check("pointwise convergence at continuity points",
                                  pointwise_decreasing && worst_fine <= 1e-8,
                                  "max error at n=" + std::to_string(fine) + ": " + fmt(worst_fine)));

    std::size_t violations = 0;
    double worst_ratio = 0.0;
    constexpr std::size_t kPairs = 500;
    for (std::size_t c = 0; c < kPairs; ++c) {
        const std::size_t d = dim(rng);
        const auto q = random_reflection_matrix(rng, d, norm(rng));
        const GridPath y1 = random_walk_path(rng, d, 50, 1.0);
        const GridPath y2 = add(y1, random_walk_path(rng, d, 50, 1.0));
        const auto rep = check_theorem4(q, y1, y2, 1.0);
        if (!rep.regulator.pass || !rep.combined.pass) ++violations;
        if (rep.regulator.rhs > 0.0) worst_ratio = std::max(worst_ratio, rep.regulator.lhs / rep.regulator.rhs);
        worst_fp = std::max(worst_fp, fixed_point_form_residual(q, y1, fast_scheme(q, y1).k));
    }
    r.checks.push_back(make_check("stability bound over " + std::to_string(kPairs) + " pairs", violations == 0,
                                  std::to_string(violations) + " violations, max lhs/rhs " + fmt(worst_ratio)));
    r.checks.push_back(make_check("fixed-point form", worst_fp <= 1e-12, "max residual " + fmt(worst_fp)));
    return r;
}

// ---------------------------------------------------------------------------

ScenarioResult run_continuous_sine(const Scenario& s, const std::filesystem::path& dir) {
    ScenarioResult r;
    const auto q = jump_example_matrix();
    constexpr std::size_t kReferenceFactor = 10;

    const auto path = dir / "continuous-sine.csv";
    auto out = open_out(path);
    out << "n,lhs,rhs,constant,modulus\n";

    double previous = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    double last_lhs = 0.0;
    for (std::size_t n : s.densities) {
        const GridPath y_ref = discretize(PathSampler(continuous_sine), kReferenceFactor * n, s.horizon);
        const auto reference = fixed_point_oracle(q, y_ref);
        const auto rep = check_theorem3(q, y_ref, n, reference, s.horizon);
        const GridPath coarse = subsample(y_ref, n);
        const double fp = fixed_point_form_residual(q, coarse, fast_scheme(q, coarse).k);

        const std::string tag = "n=" + std::to_string(n);
        r.checks.push_back(make_check("approximation bound " + tag, rep.pass,
                                      "lhs " + fmt(rep.lhs) + " <= rhs " + fmt(rep.rhs)));
        r.checks.push_back(make_check("fixed-point form " + tag, fp <= 1e-12, "residual " + fmt(fp)));
        decreasing = decreasing && rep.lhs < previous;
        previous = rep.lhs;
        last_lhs = rep.lhs;
        out << n << ',' << fmt(rep.lhs) << ',' << fmt(rep.rhs) << ',' << fmt(rep.constant) << ',' << fmt(rep.scale)
            << '\n';
    }
    r.files.push_back(path);
    r.checks.push_back(make_check("error decreases with n", decreasing, ""));
    r.checks.push_back(make_check("error < 1e-2 at n=" + std::to_string(s.densities.back()), last_lhs < 1e-2,
                                  "lhs " + fmt(last_lhs)));
    return r;
}

// ---------------------------------------------------------------------------

ScenarioResult run_rate(const Scenario& s, const std::filesystem::path& dir) {
    ScenarioResult r;
    const auto named = model_by_name(s.model);

    RateExperiment exp;
    exp.wiener = {s.seed, s.n_max, named.model.dim(), s.horizon};
    exp.densities = s.densities;
    exp.p = s.p;
    exp.paths = s.paths;
    exp.threads = s.threads;
    exp.grid = s.error_grid;
    const auto report = strong_error(named.q, named.model, exp);

    const auto path = dir / (s.name + ".csv");
    {
        auto out = open_out(path);
        write_rate_csv(out, report);
    }
    r.files.push_back(path);

    if (report.fit) {
        const auto& f = *report.fit;
        r.checks.push_back(make_check("slope in [" + fmt(s.slope_lo) + ", " + fmt(s.slope_hi) + "]",
                                      f.slope >= s.slope_lo && f.slope <= s.slope_hi, "slope " + fmt(f.slope)));
        r.checks.push_back(make_check("r^2 >= " + fmt(s.min_r_squared), f.r_squared >= s.min_r_squared,
                                      "r^2 " + fmt(f.r_squared)));
    } else {
        r.checks.push_back(make_check("slope defined", false, "fewer than two nonzero error rows"));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const auto& a = report.rows[i - 1];
        const auto& b = report.rows[i];
        monotone = monotone && b.mean <= a.mean + 2.0 * std::hypot(a.std_error, b.std_error);
    }
    r.checks.push_back(make_check("mean error non-increasing in n (2 s.e.)", monotone, ""));

    if (s.moment_paths > 0) {
        RateExperiment mexp = exp;
        mexp.paths = s.moment_paths;
        mexp.densities = s.moment_densities;
        const auto rows = sup_second_moment(named.q, named.model, mexp);
        const auto mpath = dir / (s.name + "-moments.csv");
        auto out = open_out(mpath);
        out << "n,h,mean_sup_x2,stderr\n";
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const auto& row : rows) {
            out << row.n << ',' << fmt(row.h) << ',' << fmt(row.mean) << ',' << fmt(row.std_error) << '\n';
            lo = std::min(lo, row.mean);
            hi = std::max(hi, row.mean);
        }
        r.files.push_back(mpath);
        const double spread = (hi - lo) / lo;
        r.checks.push_back(make_check("E sup|X^n|^2 varies < 10% across n", spread < 0.1, "spread " + fmt(spread)));
    }
    return r;
}

}  // namespace

ReflectionMatrix jump_example_matrix() { return ReflectionMatrix::validate({{0.0, 0.5}, {0.5, 0.0}}); }

StepFunction jump_example_input() { return {{0.0, 1.0}, {{0.0, 0.0}, {-1.0, -1.0}}}; }

Vec continuous_sine(double t) {
    const double omega = 2.0 * std::numbers::pi;
    return {std::sin(omega * t) / omega, (std::cos(omega * t) - 0.5) / omega};
}

ReflectionMatrix random_reflection_matrix(std::mt19937_64& rng, std::size_t d, double max_norm) {
    std::uniform_real_distribution<double> entry(0.0, 1.0);
    std::vector<std::vector<double>> rows(d, std::vector<double>(d, 0.0));
    std::vector<double> col(d, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (i == j) continue;
            rows[i][j] = entry(rng);
            row += rows[i][j];
            col[j] += rows[i][j];
        }
        worst = std::max(worst, row);
    }
    for (double c : col) worst = std::max(worst, c);
    if (worst > 0.0) {
        for (auto& row : rows)
            for (auto& v : row) v *= max_norm / worst;
    }
    return ReflectionMatrix::validate(rows);
}

NamedModel model_by_name(const std::string& name) {
    if (name == "bm-1d") {
        DiffusionModel m;
        m.x0 = {0.0};
        m.drift = [](std::span<const double>, std::span<double> out) { out[0] = 0.0; };
        m.diffusion = [](std::span<const double>, std::span<double> out) { out[0] = 1.0; };
        m.lipschitz_hint = 0.0;
        return {name, ReflectionMatrix::validate({{0.0}}), std::move(m)};
    }
    if (name == "diffusion-2d") {
        DiffusionModel m;
        m.x0 = {1.0, 1.0};
        m.drift = [](std::span<const double> x, std::span<double> out) {
            out[0] = 1.0 - x[0];
            out[1] = 1.0 - x[1];
        };
        m.diffusion = [](std::span<const double>, std::span<double> out) {
            out[0] = 0.5;
            out[1] = 0.0;
            out[2] = 0.0;
            out[3] = 0.5;
        };
        m.lipschitz_hint = 1.0;
        return {name, jump_example_matrix(), std::move(m)};
    }
    throw Error(ErrorCode::UnknownScenario, "unknown model '" + name + "'");
}

std::vector<std::string> model_names() { return {"bm-1d", "diffusion-2d"}; }

void Scenario::validate() const {
    require(!densities.empty(), name + ": no densities");
    for (std::size_t n : densities) require(n >= 1, name + ": densities must be >= 1");
    require(horizon > 0.0 && std::isfinite(horizon), name + ": horizon must be positive");
    if (kind == ScenarioKind::Rate) {
        require(p >= 1, name + ": p must be >= 1");
        require(paths >= 2, name + ": paths must be >= 2");
        for (std::size_t n : densities) require(n_max % n == 0, name + ": densities must divide n_max");
        for (std::size_t n : moment_densities) require(n_max % n == 0, name + ": moment densities must divide n_max");
    }
    if (kind == ScenarioKind::ContinuousSine) {
        require(std::is_sorted(densities.begin(), densities.end()), name + ": densities must be ascending");
    }
}

Scenario builtin_scenario(const std::string& name) {
    Scenario s;
    s.name = name;
    if (name == "paper-example") {
        s.kind = ScenarioKind::JumpExample;
        s.densities = {4, 16, 64};
        s.horizon = 2.0;
    } else if (name == "step-random") {
        s.kind = ScenarioKind::StepRandom;
        s.densities = {64, 4096};
        s.horizon = 2.0;
    } else if (name == "continuous-sine") {
        s.kind = ScenarioKind::ContinuousSine;
        s.densities = {10, 100, 1000};
        s.horizon = 1.0;
    } else if (name == "bm-1d-rate") {
        s.kind = ScenarioKind::Rate;
        s.model = "bm-1d";
        s.densities = {16, 32, 64, 128, 256, 512, 1024};
        s.n_max = 8192;
        s.paths = 200;
        s.p = 1;
        s.slope_lo = 0.7;
        s.slope_hi = 1.3;
        s.min_r_squared = 0.95;
    } else if (name == "diffusion-2d-rate") {
        s.kind = ScenarioKind::Rate;
        s.model = "diffusion-2d";
        s.densities = {16, 32, 64, 128, 256, 512, 1024};
        s.n_max = 8192;
        s.paths = 200;
        s.p = 1;
        s.slope_lo = 0.6;
        s.slope_hi = 1.4;
        s.moment_paths = 500;
        s.moment_densities = {64, 256, 1024};
    } else {
        throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + name + "'");
    }
    return s;
}

std::vector<std::string> scenario_names() {
    return {"paper-example", "step-random", "continuous-sine", "bm-1d-rate", "diffusion-2d-rate"};
}

void apply_overrides(Scenario& s, const KeyValues& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "seed") {
            s.seed = parse_unsigned(key, value);
        } else if (key == "paths") {
            s.paths = static_cast<std::size_t>(parse_unsigned(key, value));
        } else if (key == "p") {
            const auto p = parse_unsigned(key, value);
            // the slope window tracks the moment exponent
            const double half = 0.5 * (s.slope_hi - s.slope_lo);
            s.p = static_cast<unsigned>(p);
            if (s.kind == ScenarioKind::Rate) {
                s.slope_lo = static_cast<double>(p) - half;
                s.slope_hi = static_cast<double>(p) + half;
            }
        } else if (key == "n_max") {
            s.n_max = static_cast<std::size_t>(parse_unsigned(key, value));
        } else if (key == "densities") {
            s.densities = parse_densities(key, value);
        } else if (key == "horizon") {
            s.horizon = parse_positive(key, value);
        } else if (key == "threads") {
            s.threads = static_cast<unsigned>(parse_unsigned(key, value));
        } else if (key == "error_grid") {
            require(value == "shared" || value == "fine", key + ": expected shared or fine, got '" + value + "'");
            s.error_grid = value == "shared" ? ErrorGrid::SharedPoints : ErrorGrid::FinePoints;
        } else if (key == "moment_paths") {
            s.moment_paths = static_cast<std::size_t>(parse_unsigned(key, value));
        } else {
            throw Error(ErrorCode::ConfigParse, "unknown key '" + key + "'");
        }
    }
}

std::optional<std::uint64_t> seed_from_environment() {
    const char* env = std::getenv("ORTHANT_REFLECT_SEED");
    if (env == nullptr) return std::nullopt;
    const std::string_view text(env);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

bool ScenarioResult::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ScenarioResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
    s.validate();
    std::filesystem::create_directories(out_dir);
    switch (s.kind) {
    case ScenarioKind::JumpExample: return run_jump_example(s, out_dir);
    case ScenarioKind::StepRandom: return run_step_random(s, out_dir);
    case ScenarioKind::ContinuousSine: return run_continuous_sine(s, out_dir);
    case ScenarioKind::Rate: return run_rate(s, out_dir);
    }
    throw Error(ErrorCode::UnknownScenario, s.name);
}

void print_summary(std::ostream& out, const Scenario& s, const ScenarioResult& r) {
    for (const auto& c : r.checks) {
        out << (c.pass ? "PASS " : "FAIL ") << s.name << ": " << c.name;
        if (!c.detail.empty()) out << " (" << c.detail << ')';
        out << '\n';
    }
    for (const auto& f : r.files) out << "wrote " << f.string() << '\n';
    out << (r.pass() ? "scenario passed" : "scenario FAILED") << '\n';
}

}  // namespace orthant
