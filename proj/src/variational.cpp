#include "pspin/variational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pspin/quadrature.hpp"

namespace pspin {

namespace {

// Integral of the piecewise-linear interpolant of (times, h) over [a, b];
// [a, b] must lie inside [times.front(), times.back()].
double integrate_pl(const std::vector<double>& times, const std::vector<double>& h,
                    double a, double b) {
    auto value_at = [&](double t) {
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        size_t j = static_cast<size_t>(it - times.begin());
        if (j == 0) return h.front();
        if (j >= times.size()) return h.back();
        const double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
        return h[j - 1] * (1.0 - w) + h[j] * w;
    };
    double acc = 0.0;
    double lo = a;
    for (size_t j = 1; j < times.size() && lo < b; ++j) {
        if (times[j] <= lo) continue;
        const double hi = std::min(times[j], b);
        acc += 0.5 * (value_at(lo) + value_at(hi)) * (hi - lo);
        lo = hi;
    }
    if (lo < b) acc += 0.5 * (value_at(lo) + value_at(b)) * (b - lo);
    return acc;
}

// E[phi_x(t_j, X_j)^2] on the path time grid.
std::vector<double> phi_x_sq_means(const ParisiSolution& sol, const SdePaths& paths) {
    const int L = paths.n_steps();
    const int np = paths.n_paths();
    std::vector<double> e(L + 1, 0.0);
    for (int j = 0; j <= L; ++j) {
        double s = 0.0;
        for (int p = 0; p < np; ++p) {
            const double px = sol.phi_x(paths.times[j], paths.x[p][j]);
            s += px * px;
        }
        e[j] = s / np;
    }
    return e;
}

PdeGrid make_grid(const Mixture& m, const VariationalOptions& opts,
                  const std::vector<double>& eval_times) {
    PdeGrid grid = PdeGrid::standard(m, eval_times);
    grid.gh_nodes = opts.gh_nodes;
    grid.n_x = opts.n_x;
    return grid;
}

} // namespace

double gamma_correction(const Mixture& m, const GammaPath& g) {
    double acc = 0.0;
    for (size_t i = 0; i < g.values.size(); ++i)
        acc += g.values[i] * m.t_xi_second_integral(g.knots[i], g.knots[i + 1]);
    return 0.5 * acc;
}

double parisi_functional(const Mixture& m, const GammaPath& g, const PdeGrid& grid) {
    return solve_parisi(m, g, grid).phi00() - gamma_correction(m, g);
}

std::vector<double> parisi_gradient(const ParisiSolution& sol, const SdePaths& paths) {
    const Mixture& m = sol.mixture();
    const GammaPath& g = sol.gamma();
    const auto e = phi_x_sq_means(sol, paths);
    std::vector<double> h(e.size());
    for (size_t j = 0; j < e.size(); ++j)
        h[j] = 0.5 * m.xi_second(paths.times[j]) * (e[j] - paths.times[j]);
    std::vector<double> comp(g.values.size());
    const double t_max = paths.times.back();
    for (size_t i = 0; i < comp.size(); ++i) {
        const double a = std::min(g.knots[i], t_max);
        const double b = std::min(g.knots[i + 1], t_max);
        comp[i] = integrate_pl(paths.times, h, a, b);
    }
    return comp;
}

VariationalReport minimize_parisi(const Mixture& m, int n_knots,
                                  const VariationalOptions& opts) {
    if (n_knots < 2) throw std::invalid_argument("need at least 2 knots");

    GammaPath gamma = GammaPath::uniform(n_knots, 0.5, opts.eps_t);
    const int L = static_cast<int>(std::floor(1.0 / opts.delta + 1e-9));
    std::vector<double> eval_times(L + 1);
    for (int j = 0; j <= L; ++j) eval_times[j] = j * opts.delta;
    const PdeGrid grid = make_grid(m, opts, eval_times);
    const auto normals = sample_normals(opts.n_paths, L, opts.seed);

    std::vector<double> lens(gamma.values.size());
    for (size_t i = 0; i < lens.size(); ++i) lens[i] = gamma.knots[i + 1] - gamma.knots[i];

    VariationalReport rep;
    double step = opts.step0 > 0.0 ? opts.step0 : 0.5 / m.xi_second(1.0);
    const double step_cap = 10.0 * step;

    ParisiSolution sol = solve_parisi(m, gamma, grid);
    double value = sol.phi00() - gamma_correction(m, gamma);

    for (int it = 0; it < opts.max_iters; ++it) {
        rep.iterations = it + 1;
        rep.value_history.push_back(value);

        const DriveFunctions drive = DriveFunctions::from_parisi(sol);
        const SdePaths paths =
            simulate_sde_with_normals(m, drive, 1.0, opts.delta, normals);
        const auto comp = parisi_gradient(sol, paths);

        double gn = 0.0;
        for (size_t i = 0; i < comp.size(); ++i) {
            const double d = comp[i] / lens[i];
            const double pg = gamma.values[i] > 0.0 ? d : std::min(d, 0.0);
            gn = std::max(gn, std::abs(pg));
        }
        rep.grad_norm = gn;
        if (gn <= opts.tol) {
            rep.converged = true;
            const auto e = phi_x_sq_means(sol, paths);
            for (size_t j = 0; j < e.size(); ++j)
                rep.stationarity_profile.emplace_back(paths.times[j],
                                                      e[j] - paths.times[j]);
            break;
        }

        bool accepted = false;
        for (int bt = 0; bt < 25; ++bt) {
            GammaPath trial = gamma;
            for (size_t i = 0; i < trial.values.size(); ++i)
                trial.values[i] = std::max(trial.values[i] - step * comp[i] / lens[i], 0.0);
            ParisiSolution trial_sol = solve_parisi(m, trial, grid);
            const double trial_value = trial_sol.phi00() - gamma_correction(m, trial);
            if (trial_value < value + 1e-12) {
                gamma = trial;
                sol = std::move(trial_sol);
                value = trial_value;
                step = std::min(step * 1.3, step_cap);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // stuck against Monte Carlo noise floor
    }

    if (rep.stationarity_profile.empty()) {
        const DriveFunctions drive = DriveFunctions::from_parisi(sol);
        const SdePaths paths =
            simulate_sde_with_normals(m, drive, 1.0, opts.delta, normals);
        const auto e = phi_x_sq_means(sol, paths);
        for (size_t j = 0; j < e.size(); ++j)
            rep.stationarity_profile.emplace_back(paths.times[j], e[j] - paths.times[j]);
    }

    rep.gamma_star = gamma;
    rep.value = value;
    rep.nondecreasing = true;
    for (size_t i = 1; i < gamma.values.size(); ++i)
        if (gamma.values[i] < gamma.values[i - 1] - 0.02) rep.nondecreasing = false;
    return rep;
}

SphericalGamma spherical_gamma(const Mixture& m, int n_knots, double eps_t) {
    if (!(m.xi_second(1.0) > 0.0)) throw std::invalid_argument("xi'' must be positive");
    SphericalGamma out;
    out.truncated = m.xi_second(0.0) <= 0.0;
    GammaPath g = GammaPath::uniform(n_knots, 0.0, eps_t);
    for (size_t i = 0; i < g.values.size(); ++i) {
        const double t = 0.5 * (g.knots[i] + g.knots[i + 1]);
        // -d/dt xi''(t)^{-1/2}
        g.values[i] = 0.5 * m.xi_third(t) * std::pow(m.xi_second(t), -1.5);
    }
    out.gamma = g;
    out.value = adaptive_simpson([&](double t) { return std::sqrt(m.xi_second(t)); },
                                 0.0, 1.0, 1e-10);
    return out;
}

std::pair<double, double> hjb_value_check(const Mixture& m, const GammaPath& g,
                                          const ParisiSolution& sol) {
    // nu(t) = int_t^1 xi'' gamma, evaluated from xi' increments
    auto nu = [&](double t) {
        double acc = 0.0;
        for (size_t i = 0; i < g.values.size(); ++i) {
            const double lo = std::max(t, g.knots[i]);
            if (lo >= g.knots[i + 1]) continue;
            acc += g.values[i] * (m.xi_prime(g.knots[i + 1]) - m.xi_prime(lo));
        }
        return acc;
    };
    const double nu_int = adaptive_simpson(nu, 0.0, 1.0, 1e-9);
    const double v00 = sol.min_phi_at_zero_time() - 0.5 * nu_int;
    const double p = sol.phi00() - gamma_correction(m, g);
    return {v00, p};
}

} // namespace pspin
