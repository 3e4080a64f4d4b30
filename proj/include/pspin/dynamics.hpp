#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pspin/mixture.hpp"
#include "pspin/parisi.hpp"

namespace pspin {

// Drift/volatility pair for the state-evolution SDE
// dX_t = v(t, X_t) dt + sqrt(xi''(t)) dB_t plus their x-derivatives, needed
// by the Onsager sensitivity recursion.
struct DriveFunctions {
    std::function<double(double, double)> u, v, du_dx, dv_dx;

    // u = phi_xx, v = xi'' gamma phi_x. Captures sol by reference; the
    // solution must outlive the drive.
    static DriveFunctions from_parisi(const ParisiSolution& sol);

    // u(t, x) = xi''(t)^{-1/2}, v = 0 (sphere variant).
    static DriveFunctions spherical(const Mixture& m);
};

// Monte Carlo sample of the SDE on the grid {0, delta, ..., L*delta}.
struct SdePaths {
    double delta = 0.0;
    double t_star = 0.0;
    std::vector<double> times;               // size L+1, times[j] = j*delta
    std::vector<std::vector<double>> x;      // [path][0..L]
    std::vector<std::vector<double>> dz;     // [path][0..L-1], already sqrt(xi' increment)-scaled

    int n_paths() const { return static_cast<int>(x.size()); }
    int n_steps() const { return static_cast<int>(times.size()) - 1; }
};

// Raw N(0,1) draws, one stream per path, for common-random-number reuse.
std::vector<std::vector<double>> sample_normals(int n_paths, int n_steps, uint64_t seed);

// Explicit Euler with exact integrated step variance
// xi'((j+1)delta) - xi'(j delta).
SdePaths simulate_sde(const Mixture& m, const DriveFunctions& drive, double t_star,
                      double delta, int n_paths, uint64_t seed);
SdePaths simulate_sde_with_normals(const Mixture& m, const DriveFunctions& drive,
                                   double t_star, double delta,
                                   const std::vector<std::vector<double>>& normals);

// Discrete martingale M_j = sum_{s<j} u(s delta, X_s) dz_s per path;
// output is [path][0..L] with M_0 = 0.
std::vector<std::vector<double>> martingale_paths(const SdePaths& paths,
                                                  const DriveFunctions& drive);

// Trapezoid estimate of int_0^{t*} xi''(t) E[u(t, X_t)] dt.
double energy_functional(const Mixture& m, const DriveFunctions& drive,
                         const SdePaths& paths);

// Per-time mean/variance of X and M, exported as CSV (t, mean_x, var_x,
// mean_m, var_m).
void export_path_summary(const SdePaths& paths, const DriveFunctions& drive,
                         const std::string& csv_path);

} // namespace pspin
