#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pspin/dynamics.hpp"
#include "pspin/hamiltonian.hpp"
#include "pspin/iamp.hpp"
#include "pspin/mixture.hpp"
#include "pspin/oracle.hpp"
#include "pspin/parisi.hpp"
#include "pspin/rounding.hpp"
#include "pspin/variational.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace pspin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitResource = 4;

struct ExperimentConfig {
    std::string mixture = "2:1.0";
    std::string mode = "ising"; // ising | spherical
    int n = 2000;
    double delta = 0.02;
    double t_star = 0.95;
    int n_knots = 40;
    int n_se_samples = 100000;
    int n_paths = 100000;
    uint64_t seed_disorder = 1;
    uint64_t seed_se = 2;
    uint64_t seed_sde = 3;
    int n_x = 2001;
    int gh_nodes = 61;
    std::string out_dir = "out";

    void validate() const {
        Mixture::parse(mixture); // throws on bad spec
        if (mode != "ising" && mode != "spherical")
            throw std::invalid_argument("mode must be ising or spherical");
        if (n < 2) throw std::invalid_argument("N must be >= 2");
        if (!(delta > 0.0) || !(t_star > delta) || t_star > 1.0)
            throw std::invalid_argument("need 0 < delta < t_star <= 1");
        if (n_knots < 2) throw std::invalid_argument("n_knots must be >= 2");
        if (n_se_samples < 100 || n_paths < 100)
            throw std::invalid_argument("sample counts must be >= 100");
        if (n_x < 101 || n_x % 2 == 0) throw std::invalid_argument("n_x must be odd >= 101");
        if (gh_nodes < 11 || gh_nodes > 301)
            throw std::invalid_argument("gh_nodes must be in [11, 301]");
    }

    json to_json() const {
        return json{{"mixture", mixture},
                    {"mode", mode},
                    {"N", n},
                    {"delta", delta},
                    {"t_star", t_star},
                    {"n_knots", n_knots},
                    {"n_se_samples", n_se_samples},
                    {"n_paths", n_paths},
                    {"seed_disorder", seed_disorder},
                    {"seed_se", seed_se},
                    {"seed_sde", seed_sde},
                    {"n_x", n_x},
                    {"gh_nodes", gh_nodes},
                    {"out_dir", out_dir}};
    }

    void set_key(const std::string& key, const std::string& value) {
        if (key == "mixture") mixture = value;
        else if (key == "mode") mode = value;
        else if (key == "N") n = std::stoi(value);
        else if (key == "delta") delta = std::stod(value);
        else if (key == "t_star") t_star = std::stod(value);
        else if (key == "n_knots") n_knots = std::stoi(value);
        else if (key == "n_se_samples") n_se_samples = std::stoi(value);
        else if (key == "n_paths") n_paths = std::stoi(value);
        else if (key == "seed_disorder") seed_disorder = std::stoull(value);
        else if (key == "seed_se") seed_se = std::stoull(value);
        else if (key == "seed_sde") seed_sde = std::stoull(value);
        else if (key == "n_x") n_x = std::stoi(value);
        else if (key == "gh_nodes") gh_nodes = std::stoi(value);
        else if (key == "out_dir") out_dir = value;
        else throw std::invalid_argument("unknown config key: " + key);
    }

    void load_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::invalid_argument("cannot open config file " + path);
        std::string line;
        while (std::getline(f, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw std::invalid_argument("malformed config line: " + line);
                continue;
            }
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            set_key(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }
};

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

json stamped(const ExperimentConfig& cfg, json body) {
    json out = std::move(body);
    out["config"] = cfg.to_json();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(cfg.to_json().dump())));
    out["config_hash"] = std::string(buf);
    return out;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << j.dump(2) << "\n";
}

void write_gamma_csv(const fs::path& path, const GammaPath& g) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "t,gamma\n";
    for (size_t i = 0; i < g.values.size(); ++i)
        f << g.knots[i] << "," << g.values[i] << "\n";
    f << g.knots.back() << "," << g.values.back() << "\n";
}

VariationalOptions variational_options(const ExperimentConfig& cfg) {
    VariationalOptions o;
    o.n_paths = cfg.n_paths;
    o.seed = cfg.seed_sde;
    o.n_x = cfg.n_x;
    o.gh_nodes = cfg.gh_nodes;
    return o;
}

struct StageClock {
    json profile = json::object();
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    void lap(const std::string& name) {
        const auto t1 = std::chrono::steady_clock::now();
        profile[name] = std::chrono::duration<double>(t1 - t0).count();
        t0 = t1;
    }
};

int cmd_solve_gamma(const ExperimentConfig& cfg) {
    const Mixture m = Mixture::parse(cfg.mixture);
    fs::create_directories(cfg.out_dir);
    if (cfg.mode == "spherical") {
        const SphericalGamma sg = spherical_gamma(m, cfg.n_knots);
        write_gamma_csv(fs::path(cfg.out_dir) / "gamma.csv", sg.gamma);
        write_json(fs::path(cfg.out_dir) / "report.json",
                   stamped(cfg, {{"mode", "spherical"},
                                 {"value", sg.value},
                                 {"truncated", sg.truncated},
                                 {"converged", true}}));
        std::cout << "spherical value = " << sg.value << "\n";
        return kExitOk;
    }
    const VariationalReport rep = minimize_parisi(m, cfg.n_knots, variational_options(cfg));
    write_gamma_csv(fs::path(cfg.out_dir) / "gamma.csv", rep.gamma_star);
    double max_stat = 0.0;
    for (const auto& [t, dev] : rep.stationarity_profile)
        max_stat = std::max(max_stat, std::abs(dev));
    write_json(fs::path(cfg.out_dir) / "report.json",
               stamped(cfg, {{"mode", "ising"},
                             {"value", rep.value},
                             {"grad_norm", rep.grad_norm},
                             {"iterations", rep.iterations},
                             {"converged", rep.converged},
                             {"nondecreasing", rep.nondecreasing},
                             {"max_stationarity_dev", max_stat},
                             {"value_history", rep.value_history}}));
    std::cout << "P(gamma*) = " << rep.value << " after " << rep.iterations
              << " iterations (converged=" << rep.converged << ")\n";
    return rep.converged ? kExitOk : kExitNumeric;
}

int cmd_run(const ExperimentConfig& cfg, bool dry_run) {
    const Mixture m = Mixture::parse(cfg.mixture);
    if (dry_run) {
        IampConfig icfg{cfg.delta, cfg.t_star, cfg.n_se_samples, cfg.seed_se};
        std::cout << "plan: mixture " << m.to_string() << ", mode " << cfg.mode << ", N "
                  << cfg.n << ", delta " << cfg.delta << ", t* " << cfg.t_star << ", "
                  << icfg.n_iters() << " iterations, output " << cfg.out_dir << "\n"
                  << "stages: gamma -> calibrate -> disorder -> iamp -> round\n";
        return kExitOk;
    }
    fs::create_directories(cfg.out_dir);
    StageClock clock;

    IampConfig icfg;
    icfg.delta = cfg.delta;
    icfg.t_star = cfg.t_star;
    icfg.n_se_samples = cfg.n_se_samples;
    icfg.seed = cfg.seed_se;
    const int L = icfg.n_iters();

    // drive functions
    std::vector<double> eval_times(L + 1);
    for (int j = 0; j <= L; ++j) eval_times[j] = j * cfg.delta;
    GammaPath gamma = GammaPath::zero();
    double gamma_value = 0.0;
    ParisiSolution sol; // keep alive for the drive
    DriveFunctions drive;
    if (cfg.mode == "spherical") {
        const SphericalGamma sg = spherical_gamma(m, cfg.n_knots);
        gamma = sg.gamma;
        gamma_value = sg.value;
        drive = DriveFunctions::spherical(m);
    } else {
        const VariationalReport rep =
            minimize_parisi(m, cfg.n_knots, variational_options(cfg));
        if (!rep.converged)
            std::cerr << "warning: gamma descent not converged (grad_norm "
                      << rep.grad_norm << ")\n";
        gamma = rep.gamma_star;
        gamma_value = rep.value;
        PdeGrid grid = PdeGrid::standard(m, eval_times);
        grid.n_x = cfg.n_x;
        grid.gh_nodes = cfg.gh_nodes;
        sol = solve_parisi(m, gamma, grid);
        drive = DriveFunctions::from_parisi(sol);
    }
    write_gamma_csv(fs::path(cfg.out_dir) / "gamma.csv", gamma);
    clock.lap("gamma");

    const SECalibration cal = calibrate(m, drive, icfg);
    write_json(fs::path(cfg.out_dir) / "calibration.json",
               stamped(cfg, {{"L", cal.L},
                             {"sigma", cal.sigma},
                             {"increment_vars", cal.increment_vars},
                             {"mean_u", cal.mean_u}}));
    clock.lap("calibrate");

    const DisorderSample d = DisorderSample::sample(cfg.n, m, cfg.seed_disorder);
    clock.lap("disorder");

    const IampRun run = run_iamp(d, drive, cal, icfg);
    {
        std::ofstream jl(fs::path(cfg.out_dir) / "iterations.jsonl");
        for (int l = 0; l <= run.n_iters(); ++l)
            jl << json{{"iter", l},
                       {"norm_m", run.norm_m[l]},
                       {"energy", run.energy[l]},
                       {"se_pred_energy", run.se_pred_energy[l]},
                       {"max_abs_m", run.max_abs_m[l]}}
                      .dump()
               << "\n";
    }
    clock.lap("iamp");
    if (run.aborted) {
        write_json(fs::path(cfg.out_dir) / "rounding.json",
                   stamped(cfg, {{"error", "iamp aborted"},
                                 {"abort_iteration", run.abort_iteration}}));
        std::cerr << "iamp aborted at iteration " << run.abort_iteration << "\n";
        return kExitNumeric;
    }

    const RoundingReport rr = round_pipeline(
        d, run, cfg.mode == "spherical" ? RoundingMode::spherical : RoundingMode::ising);
    clock.lap("round");
    write_json(fs::path(cfg.out_dir) / "rounding.json",
               stamped(cfg, {{"gamma_value", gamma_value},
                             {"energy_m", rr.energy_m},
                             {"energy_m_hat", rr.energy_m_hat},
                             {"energy_mtilde_m_hat", rr.energy_mtilde_m_hat},
                             {"energy_mtilde_sigma", rr.energy_mtilde_sigma},
                             {"energy_sigma", rr.energy_sigma},
                             {"clip_fraction", rr.clip_fraction},
                             {"monotone", rr.monotone},
                             {"profile", clock.profile}}));
    std::cout << "final energy H(sigma)/N = " << rr.energy_sigma
              << " (gamma value " << gamma_value << ")\n";
    if (!rr.monotone) return kExitNumeric;
    return kExitOk;
}

int cmd_pde_check(const ExperimentConfig& cfg, bool as_json) {
    const Mixture m = Mixture::parse(cfg.mixture);
    const GammaPath g = GammaPath::zero();
    PdeGrid grid = PdeGrid::standard(m, {0.0, 0.25, 0.5, 0.75});
    grid.n_x = cfg.n_x;
    grid.gh_nodes = cfg.gh_nodes;
    const ParisiSolution sol = solve_parisi(m, g, grid);

    double max_err = 0.0;
    for (double t : {0.0, 0.25, 0.5, 0.75}) {
        for (int j = 0; j < grid.n_x; ++j) {
            const double x = -grid.x_max + j * grid.dx();
            max_err = std::max(max_err,
                               std::abs(sol.phi(t, x) - closed_form_gamma_zero(m, t, x)));
        }
    }
    const double phi00 = sol.phi00();
    const double target = std::sqrt(2.0 * m.xi_prime(1.0) / M_PI);
    const double err00 = std::abs(phi00 - target);

    // structural invariants on a probe set
    bool invariants = true;
    for (double t : {0.0, 0.25, 0.5, 0.75})
        for (double x = -6.0; x <= 6.0; x += 0.25) {
            if (sol.phi(t, x) < std::abs(x) - 1e-6) invariants = false;
            if (std::abs(sol.phi_x(t, x)) > 1.0 + 1e-9) invariants = false;
            if (sol.phi_xx(t, x) < -1e-6) invariants = false;
        }

    const bool pass = max_err <= 1e-3 && err00 <= 1e-3 && invariants;
    if (as_json)
        std::cout << stamped(cfg, {{"phi00", phi00},
                                   {"closed_form", target},
                                   {"max_slice_error", max_err},
                                   {"invariants", invariants},
                                   {"pass", pass}})
                         .dump(2)
                  << "\n";
    else
        std::cout << "phi(0,0) = " << phi00 << " vs closed form " << target
                  << ", max slice error " << max_err << ", invariants "
                  << (invariants ? "ok" : "VIOLATED") << " -> "
                  << (pass ? "pass" : "FAIL") << "\n";
    return pass ? kExitOk : kExitNumeric;
}

int cmd_se_check(const ExperimentConfig& cfg, bool as_json) {
    const Mixture m = Mixture::parse(cfg.mixture);
    IampConfig icfg;
    icfg.delta = cfg.delta;
    icfg.t_star = cfg.t_star;
    icfg.n_se_samples = cfg.n_se_samples;
    icfg.seed = cfg.seed_se;
    const int L = icfg.n_iters();

    std::vector<double> eval_times(L + 1);
    for (int j = 0; j <= L; ++j) eval_times[j] = j * cfg.delta;
    ParisiSolution sol;
    DriveFunctions drive;
    if (cfg.mode == "spherical") {
        drive = DriveFunctions::spherical(m);
    } else {
        const VariationalReport rep =
            minimize_parisi(m, cfg.n_knots, variational_options(cfg));
        PdeGrid grid = PdeGrid::standard(m, eval_times);
        grid.n_x = cfg.n_x;
        grid.gh_nodes = cfg.gh_nodes;
        sol = solve_parisi(m, rep.gamma_star, grid);
        drive = DriveFunctions::from_parisi(sol);
    }
    const SECalibration cal = calibrate(m, drive, icfg);
    const DisorderSample d = DisorderSample::sample(cfg.n, m, cfg.seed_disorder);
    const IampRun run = run_iamp(d, drive, cal, icfg);
    const SeCheckReport rep = se_check(run, cal);

    if (as_json)
        std::cout << stamped(cfg, {{"max_abs_z_score", rep.max_abs_z_score},
                                   {"max_rel_err_cov", rep.max_rel_err_cov},
                                   {"norm_law_max_dev", rep.norm_law_max_dev},
                                   {"aborted", run.aborted},
                                   {"pass", rep.pass}})
                         .dump(2)
                  << "\n";
    else
        std::cout << "norm law max dev " << rep.norm_law_max_dev << ", max |z| "
                  << rep.max_abs_z_score << ", max cov rel err " << rep.max_rel_err_cov
                  << " -> " << (rep.pass ? "pass" : "FAIL") << "\n";
    return rep.pass ? kExitOk : kExitNumeric;
}

int cmd_oracle(const ExperimentConfig& cfg) {
    const Mixture m = Mixture::parse(cfg.mixture);
    if (cfg.n > 22) {
        std::cerr << "brute force refused for N > 22\n";
        return kExitResource;
    }
    const DisorderSample d = DisorderSample::sample(cfg.n, m, cfg.seed_disorder);
    const BruteForceResult r = brute_force_opt(d);
    std::cout << "OPT_" << cfg.n << " = " << r.opt_value << "\nargmax =";
    for (int8_t s : r.argmax.sigma) std::cout << " " << int(s);
    std::cout << "\n";
    return kExitOk;
}

int cmd_bench(const ExperimentConfig& cfg) {
    const Mixture m = Mixture::parse(cfg.mixture);
    const int n = std::min(cfg.n, 500);
    const auto t0 = std::chrono::steady_clock::now();
    const DisorderSample d = DisorderSample::sample(n, m, cfg.seed_disorder);
    const auto t1 = std::chrono::steady_clock::now();
    std::vector<double> x(n, 0.5);
    double acc = 0.0;
    for (int r = 0; r < 10; ++r) acc += d.energy(x);
    const auto t2 = std::chrono::steady_clock::now();
    for (int r = 0; r < 10; ++r) acc += d.grad(x)[0];
    const auto t3 = std::chrono::steady_clock::now();
    const PdeGrid grid = PdeGrid::standard(m, {0.0, 0.5});
    solve_parisi(m, GammaPath::uniform(10, 0.5), grid);
    const auto t4 = std::chrono::steady_clock::now();
    auto ms = [](auto a, auto b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };
    std::cout << "N = " << n << " (" << m.to_string() << ")\n"
              << "sample disorder: " << ms(t0, t1) << " ms\n"
              << "energy x10:      " << ms(t1, t2) << " ms\n"
              << "grad x10:        " << ms(t2, t3) << " ms\n"
              << "pde solve:       " << ms(t3, t4) << " ms\n";
    return acc == acc ? kExitOk : kExitNumeric;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed p-spin optimization via incremental AMP"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_file;
    bool dry_run = false, as_json = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "key = value config file");
        sub->add_option("--mixture", cfg.mixture, "mixture spec, e.g. 2:1.0,4:0.5");
        sub->add_option("--mode", cfg.mode, "ising | spherical");
        sub->add_option("-N,--size", cfg.n, "dimension N");
        sub->add_option("--delta", cfg.delta, "AMP step size");
        sub->add_option("--t-star", cfg.t_star, "stopping time");
        sub->add_option("--n-knots", cfg.n_knots, "gamma knot count");
        sub->add_option("--n-se-samples", cfg.n_se_samples, "SE calibration samples");
        sub->add_option("--n-paths", cfg.n_paths, "SDE Monte Carlo paths");
        sub->add_option("--seed-disorder", cfg.seed_disorder, "disorder seed");
        sub->add_option("--seed-se", cfg.seed_se, "SE seed");
        sub->add_option("--seed-sde", cfg.seed_sde, "SDE seed");
        sub->add_option("--n-x", cfg.n_x, "PDE grid points");
        sub->add_option("--gh-nodes", cfg.gh_nodes, "Gauss-Hermite nodes");
        sub->add_option("-o,--out-dir", cfg.out_dir, "output directory");
    };

    auto* solve = app.add_subcommand("solve-gamma", "minimize the Parisi functional");
    add_common(solve);
    auto* runc = app.add_subcommand("run", "full pipeline: gamma, calibrate, iamp, round");
    add_common(runc);
    runc->add_flag("--dry-run", dry_run, "validate and print the plan only");
    auto* sec = app.add_subcommand("se-check", "state-evolution diagnostics");
    add_common(sec);
    sec->add_flag("--json", as_json, "machine-readable output");
    auto* pdec = app.add_subcommand("pde-check", "PDE solver diagnostics");
    add_common(pdec);
    pdec->add_flag("--json", as_json, "machine-readable output");
    auto* orac = app.add_subcommand("oracle", "brute-force optimum at small N");
    add_common(orac);
    auto* bench = app.add_subcommand("bench", "timing micro-benchmarks");
    add_common(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (!config_file.empty()) {
            // file first, then re-apply explicit flags by reparsing
            ExperimentConfig base;
            base.load_file(config_file);
            std::swap(cfg, base);
            // flags already parsed into base; copy over values that differ from defaults
            ExperimentConfig defaults;
            auto keep = [&](auto member) {
                if (base.*member != defaults.*member) cfg.*member = base.*member;
            };
            keep(&ExperimentConfig::mixture);
            keep(&ExperimentConfig::mode);
            keep(&ExperimentConfig::n);
            keep(&ExperimentConfig::delta);
            keep(&ExperimentConfig::t_star);
            keep(&ExperimentConfig::n_knots);
            keep(&ExperimentConfig::n_se_samples);
            keep(&ExperimentConfig::n_paths);
            keep(&ExperimentConfig::seed_disorder);
            keep(&ExperimentConfig::seed_se);
            keep(&ExperimentConfig::seed_sde);
            keep(&ExperimentConfig::n_x);
            keep(&ExperimentConfig::gh_nodes);
            keep(&ExperimentConfig::out_dir);
        }
        cfg.validate();

        if (solve->parsed()) return cmd_solve_gamma(cfg);
        if (runc->parsed()) return cmd_run(cfg, dry_run);
        if (sec->parsed()) return cmd_se_check(cfg, as_json);
        if (pdec->parsed()) return cmd_pde_check(cfg, as_json);
        if (orac->parsed()) return cmd_oracle(cfg);
        if (bench->parsed()) return cmd_bench(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::length_error& e) {
        std::cerr << "resource refusal: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitValidation;
}
