#pragma once

#include <cstdint>
#include <vector>

#include "pspin/dynamics.hpp"
#include "pspin/hamiltonian.hpp"
#include "pspin/mixture.hpp"

namespace pspin {

struct IampConfig {
    double delta = 0.02;
    double t_star = 0.95;
    int n_se_samples = 100000;
    uint64_t seed = 11;

    int n_iters() const; // l* = floor(t*/delta), validated
};

// State-evolution calibration: everything the AMP loop needs that does not
// depend on the disorder sample.
struct SECalibration {
    double delta = 0.0;
    int L = 0;                          // iterations z^1..z^L
    std::vector<double> increment_vars; // [l], Var(z^{l+1}-z^l) = xi'((l+1)d)-xi'(ld)
    std::vector<double> sigma;          // [j], rescaling Sigma^d_j, j = 0..L-1
    std::vector<double> mean_u;         // [j], E[u(jd, X_j)]
    std::vector<double> mean_u2;        // [j], E[u(jd, X_j)^2]
    std::vector<std::vector<double>> onsager;    // onsager[l][j], 0 <= j <= l < L
    std::vector<std::vector<double>> se_moments; // E[m^l m^j] table, 0 <= j <= l <= L

    // u^d_j(x) = u(jd, x)/sigma[j] for j >= 1; u^d_0 = sqrt(delta/xi'(delta)).
    double u_delta(const DriveFunctions& drive, int j, double x) const;
    double du_delta(const DriveFunctions& drive, int j, double x) const;
};

struct IampRun {
    IampConfig cfg;
    std::vector<std::vector<double>> z; // [0..L][N], z[0] = 0
    std::vector<std::vector<double>> m; // [0..L][N], m[0] = sqrt(delta)
    std::vector<std::vector<double>> x; // [0..L][N]
    std::vector<double> norm_m;         // <m^l, m^l>_N
    std::vector<double> energy;         // H_N(m^l)/N
    std::vector<double> se_pred_energy; // running sum xi''(kd) E[u] d
    std::vector<double> max_abs_m;
    bool aborted = false;
    int abort_iteration = -1;

    int n_iters() const { return static_cast<int>(m.size()) - 1; }
    const std::vector<double>& final_m() const { return m.back(); }
};

struct SeCheckReport {
    std::vector<double> increment_var_z_scores; // psi(z) = (z^{l+1}-z^l)^2
    double max_abs_z_score = 0.0;
    double max_rel_err_cov = 0.0; // <m^l, m^j>_N vs (min(l,j)+1) delta
    double norm_law_max_dev = 0.0;
    bool pass = false;
};

// Monte Carlo over n_se_samples discrete state-evolution paths: rescalings
// Sigma^d_j, Onsager coefficients d_{l,j} = xi''(jd) E[df_l/dz^j] via
// pathwise forward sensitivities, and the moment tables.
SECalibration calibrate(const Mixture& m, const DriveFunctions& drive,
                        const IampConfig& cfg);

// The message-passing loop z^{l+1} = grad H_N(m^l) - sum_j d_{l,j} m^{j-1}
// with per-coordinate x/m recursions. onsager_enabled = false zeroes the
// memory terms (negative control).
IampRun run_iamp(const DisorderSample& d, const DriveFunctions& drive,
                 const SECalibration& cal, const IampConfig& cfg,
                 bool onsager_enabled = true);

SeCheckReport se_check(const IampRun& run, const SECalibration& cal);

} // namespace pspin
