#include "pspin/iamp.hpp"

#include <cmath>
#include <stdexcept>

namespace pspin {

int IampConfig::n_iters() const {
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta in (0,1)");
    if (!(t_star > delta) || t_star > 1.0) throw std::invalid_argument("t_star in (delta,1]");
    const int L = static_cast<int>(std::floor(t_star / delta + 1e-9));
    if (L < 1) throw std::invalid_argument("t_star too small");
    return L;
}

double SECalibration::u_delta(const DriveFunctions& drive, int j, double x) const {
    if (j == 0) return std::sqrt(delta / increment_vars[0]);
    return drive.u(j * delta, x) / sigma[j];
}

double SECalibration::du_delta(const DriveFunctions& drive, int j, double x) const {
    if (j == 0) return 0.0;
    return drive.du_dx(j * delta, x) / sigma[j];
}

SECalibration calibrate(const Mixture& m, const DriveFunctions& drive,
                        const IampConfig& cfg) {
    SECalibration cal;
    cal.delta = cfg.delta;
    const int L = cfg.n_iters();
    cal.L = L;
    const double d = cfg.delta;

    cal.increment_vars.resize(L);
    for (int l = 0; l < L; ++l)
        cal.increment_vars[l] = m.xi_prime((l + 1) * d) - m.xi_prime(l * d);

    // discrete SE paths share the SDE recursion
    const SdePaths paths = simulate_sde(m, drive, L * d, d, cfg.n_se_samples, cfg.seed);
    const int np = paths.n_paths();

    cal.mean_u.assign(L, 0.0);
    cal.mean_u2.assign(L, 0.0);
    for (int j = 0; j < L; ++j) {
        double s = 0.0, s2 = 0.0;
        for (int p = 0; p < np; ++p) {
            const double uv = drive.u(j * d, paths.x[p][j]);
            s += uv;
            s2 += uv * uv;
        }
        cal.mean_u[j] = s / np;
        cal.mean_u2[j] = s2 / np;
        if (!std::isfinite(cal.mean_u2[j]))
            throw std::runtime_error("calibration error: non-finite E[u^2] at step " +
                                     std::to_string(j));
    }

    cal.sigma.resize(L);
    for (int j = 0; j < L; ++j)
        cal.sigma[j] = std::sqrt(cal.increment_vars[j] / d * cal.mean_u2[j]);

    // martingale moment table E[m^l m^j]
    {
        std::vector<double> mpath(L + 1);
        std::vector<std::vector<double>> mom(L + 1);
        for (int l = 0; l <= L; ++l) mom[l].assign(l + 1, 0.0);
        for (int p = 0; p < np; ++p) {
            mpath[0] = std::sqrt(d);
            for (int j = 0; j < L; ++j)
                mpath[j + 1] =
                    mpath[j] + cal.u_delta(drive, j, paths.x[p][j]) * paths.dz[p][j];
            for (int l = 0; l <= L; ++l)
                for (int j = 0; j <= l; ++j) mom[l][j] += mpath[l] * mpath[j];
        }
        for (auto& row : mom)
            for (auto& v : row) v /= np;
        cal.se_moments = std::move(mom);
    }

    // Onsager coefficients via pathwise forward sensitivities:
    // df_l/dz^j = u^d_{j-1}(x^{j-1}) - u^d_j(x^j) 1{j<=l-1}
    //           + sum_{k=j}^{l-1} (u^d_k)'(x^k) Dx_k dz_{k+1},
    // Dx_j = 1, Dx_{k+1} = Dx_k (1 + dv/dx(kd, x^k) d) - 1{k==j}.
    cal.onsager.assign(L, std::vector<double>(L, 0.0));
    for (int p = 0; p < np; ++p) {
        const auto& x = paths.x[p];
        const auto& dz = paths.dz[p];
        for (int j = 1; j < L; ++j) {
            const double base1 = cal.u_delta(drive, j - 1, x[j - 1]);
            cal.onsager[j][j] += base1; // l = j term: u^d_{j-1} only
            const double base2 = base1 - cal.u_delta(drive, j, x[j]);
            double dx_sens = 1.0, chain = 0.0;
            for (int k = j; k < L - 1; ++k) { // contributes to l = k+1 <= L-1
                chain += cal.du_delta(drive, k, x[k]) * dx_sens * dz[k];
                cal.onsager[k + 1][j] += base2 + chain;
                dx_sens = dx_sens * (1.0 + drive.dv_dx(k * d, x[k]) * d) -
                          (k == j ? 1.0 : 0.0);
            }
        }
    }
    for (int l = 0; l < L; ++l) {
        cal.onsager[l][0] = 0.0; // multiplies f_{-1} == 0
        for (int j = 1; j <= l; ++j) {
            cal.onsager[l][j] = m.xi_second(j * d) * cal.onsager[l][j] / np;
            if (!std::isfinite(cal.onsager[l][j]))
                throw std::runtime_error("calibration error: non-finite Onsager term");
        }
    }
    return cal;
}

IampRun run_iamp(const DisorderSample& d, const DriveFunctions& drive,
                 const SECalibration& cal, const IampConfig& cfg, bool onsager_enabled) {
    const int N = d.n();
    const int L = cfg.n_iters();
    if (cal.L != L || std::abs(cal.delta - cfg.delta) > 1e-12)
        throw std::invalid_argument("calibration does not match config");
    const double dt = cfg.delta;

    IampRun run;
    run.cfg = cfg;
    run.z.assign(1, std::vector<double>(N, 0.0));
    run.x.assign(1, std::vector<double>(N, 0.0));
    run.m.assign(1, std::vector<double>(N, std::sqrt(dt)));

    auto push_diagnostics = [&](int l) {
        const auto& mv = run.m[l];
        double n2 = 0.0, mx = 0.0;
        for (double v : mv) {
            n2 += v * v;
            mx = std::max(mx, std::abs(v));
        }
        run.norm_m.push_back(n2 / N);
        run.max_abs_m.push_back(mx);
        run.energy.push_back(d.energy(mv));
        double pred = 0.0;
        for (int k = 0; k <= std::min(l, cal.L - 1); ++k)
            pred += d.mixture().xi_second(k * dt) * cal.mean_u[k] * dt;
        run.se_pred_energy.push_back(pred);
    };
    push_diagnostics(0);

    for (int l = 0; l < L; ++l) {
        std::vector<double> znew = d.grad(run.m[l]);
        if (onsager_enabled) {
            for (int j = 1; j <= l; ++j) {
                const double c = cal.onsager[l][j];
                if (c == 0.0) continue;
                const auto& mj = run.m[j - 1];
                for (int i = 0; i < N; ++i) znew[i] -= c * mj[i];
            }
        }
        bool bad = false;
        for (double v : znew)
            if (!std::isfinite(v) || std::abs(v) > 1e8) bad = true;
        if (bad) {
            run.aborted = true;
            run.abort_iteration = l + 1;
            break;
        }

        std::vector<double> xnew(N), mnew(N);
        const auto& zold = run.z[l];
        const auto& xold = run.x[l];
        const auto& mold = run.m[l];
        for (int i = 0; i < N; ++i) {
            const double dz = znew[i] - zold[i];
            xnew[i] = xold[i] + drive.v(l * dt, xold[i]) * dt + dz;
            mnew[i] = mold[i] + cal.u_delta(drive, l, xold[i]) * dz;
        }
        run.z.push_back(std::move(znew));
        run.x.push_back(std::move(xnew));
        run.m.push_back(std::move(mnew));
        push_diagnostics(l + 1);
    }
    return run;
}

SeCheckReport se_check(const IampRun& run, const SECalibration& cal) {
    SeCheckReport rep;
    const int L = run.n_iters();
    const int N = static_cast<int>(run.m[0].size());

    for (int l = 0; l < L; ++l) {
        double s2 = 0.0, s4 = 0.0;
        for (int i = 0; i < N; ++i) {
            const double inc = run.z[l + 1][i] - run.z[l][i];
            s2 += inc * inc;
            s4 += inc * inc * inc * inc;
        }
        const double emp = s2 / N;
        const double se = std::sqrt(std::max(s4 / N - emp * emp, 1e-300) / N);
        const double zs = (emp - cal.increment_vars[l]) / se;
        rep.increment_var_z_scores.push_back(zs);
        rep.max_abs_z_score = std::max(rep.max_abs_z_score, std::abs(zs));
    }

    const double d = cal.delta;
    for (int l = 0; l <= L; ++l) {
        for (int j = 0; j <= l; ++j) {
            double s = 0.0;
            for (int i = 0; i < N; ++i) s += run.m[l][i] * run.m[j][i];
            const double expect = (j + 1) * d;
            rep.max_rel_err_cov =
                std::max(rep.max_rel_err_cov, std::abs(s / N - expect) / expect);
        }
        rep.norm_law_max_dev =
            std::max(rep.norm_law_max_dev, std::abs(run.norm_m[l] - (l + 1) * d));
    }
    rep.pass = !run.aborted && rep.max_abs_z_score <= 3.0 && rep.max_rel_err_cov <= 0.05 &&
               rep.norm_law_max_dev <= 0.05;
    return rep;
}

} // namespace pspin
