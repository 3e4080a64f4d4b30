#include "pspin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "pspin/rng.hpp"

namespace pspin {

DriveFunctions DriveFunctions::from_parisi(const ParisiSolution& sol) {
    const ParisiSolution* s = &sol;
    DriveFunctions d;
    d.u = [s](double t, double x) { return s->phi_xx(t, x); };
    d.v = [s](double t, double x) {
        return s->mixture().xi_second(t) * s->gamma().at(t) * s->phi_x(t, x);
    };
    d.du_dx = [s](double t, double x) { return s->phi_xxx(t, x); };
    d.dv_dx = [s](double t, double x) {
        return s->mixture().xi_second(t) * s->gamma().at(t) * s->phi_xx(t, x);
    };
    return d;
}

DriveFunctions DriveFunctions::spherical(const Mixture& m) {
    DriveFunctions d;
    d.u = [m](double t, double) { return 1.0 / std::sqrt(std::max(m.xi_second(t), 1e-12)); };
    d.v = [](double, double) { return 0.0; };
    d.du_dx = [](double, double) { return 0.0; };
    d.dv_dx = [](double, double) { return 0.0; };
    return d;
}

std::vector<std::vector<double>> sample_normals(int n_paths, int n_steps, uint64_t seed) {
    std::vector<std::vector<double>> out(n_paths);
    for (int p = 0; p < n_paths; ++p) {
        CounterRng rng(seed, static_cast<uint64_t>(p));
        out[p].resize(n_steps);
        for (int j = 0; j < n_steps; ++j) out[p][j] = rng.normal();
    }
    return out;
}

SdePaths simulate_sde_with_normals(const Mixture& m, const DriveFunctions& drive,
                                   double t_star, double delta,
                                   const std::vector<std::vector<double>>& normals) {
    if (!(delta > 0.0) || delta > t_star || t_star > 1.0 + 1e-12)
        throw std::invalid_argument("need 0 < delta <= t_star <= 1");
    if (normals.empty()) throw std::invalid_argument("need at least one path");
    const int L = static_cast<int>(std::floor(t_star / delta + 1e-9));
    if (static_cast<int>(normals[0].size()) < L)
        throw std::invalid_argument("not enough normals per path");

    SdePaths paths;
    paths.delta = delta;
    paths.t_star = t_star;
    paths.times.resize(L + 1);
    for (int j = 0; j <= L; ++j) paths.times[j] = j * delta;

    std::vector<double> step_sd(L);
    for (int j = 0; j < L; ++j)
        step_sd[j] = std::sqrt(m.xi_prime((j + 1) * delta) - m.xi_prime(j * delta));

    const int n_paths = static_cast<int>(normals.size());
    paths.x.assign(n_paths, std::vector<double>(L + 1));
    paths.dz.assign(n_paths, std::vector<double>(L));
    for (int p = 0; p < n_paths; ++p) {
        double xv = 0.0;
        paths.x[p][0] = 0.0;
        for (int j = 0; j < L; ++j) {
            const double inc = step_sd[j] * normals[p][j];
            paths.dz[p][j] = inc;
            xv += drive.v(j * delta, xv) * delta + inc;
            paths.x[p][j + 1] = xv;
        }
    }
    return paths;
}

SdePaths simulate_sde(const Mixture& m, const DriveFunctions& drive, double t_star,
                      double delta, int n_paths, uint64_t seed) {
    if (n_paths < 1) throw std::invalid_argument("need at least one path");
    const int L = static_cast<int>(std::floor(t_star / delta + 1e-9));
    return simulate_sde_with_normals(m, drive, t_star, delta,
                                     sample_normals(n_paths, L, seed));
}

std::vector<std::vector<double>> martingale_paths(const SdePaths& paths,
                                                  const DriveFunctions& drive) {
    const int L = paths.n_steps();
    std::vector<std::vector<double>> m(paths.n_paths(), std::vector<double>(L + 1));
    for (int p = 0; p < paths.n_paths(); ++p) {
        double acc = 0.0;
        m[p][0] = 0.0;
        for (int j = 0; j < L; ++j) {
            acc += drive.u(paths.times[j], paths.x[p][j]) * paths.dz[p][j];
            m[p][j + 1] = acc;
        }
    }
    return m;
}

double energy_functional(const Mixture& m, const DriveFunctions& drive,
                         const SdePaths& paths) {
    const int L = paths.n_steps();
    const int np = paths.n_paths();
    std::vector<double> g(L + 1);
    for (int j = 0; j <= L; ++j) {
        double s = 0.0;
        for (int p = 0; p < np; ++p) s += drive.u(paths.times[j], paths.x[p][j]);
        g[j] = m.xi_second(paths.times[j]) * s / np;
    }
    double e = 0.0;
    for (int j = 0; j < L; ++j) e += 0.5 * (g[j] + g[j + 1]) * paths.delta;
    return e;
}

void export_path_summary(const SdePaths& paths, const DriveFunctions& drive,
                         const std::string& csv_path) {
    std::ofstream f(csv_path);
    if (!f) throw std::runtime_error("cannot open " + csv_path);
    const auto mart = martingale_paths(paths, drive);
    const int np = paths.n_paths();
    f << "t,mean_x,var_x,mean_m,var_m\n";
    for (size_t j = 0; j < paths.times.size(); ++j) {
        double sx = 0, sx2 = 0, sm = 0, sm2 = 0;
        for (int p = 0; p < np; ++p) {
            sx += paths.x[p][j];
            sx2 += paths.x[p][j] * paths.x[p][j];
            sm += mart[p][j];
            sm2 += mart[p][j] * mart[p][j];
        }
        const double mx = sx / np, mm = sm / np;
        f << paths.times[j] << "," << mx << "," << sx2 / np - mx * mx << "," << mm << ","
          << sm2 / np - mm * mm << "\n";
    }
}

} // namespace pspin
