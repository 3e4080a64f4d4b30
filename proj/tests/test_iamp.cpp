#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pspin/iamp.hpp"

using namespace pspin;

TEST_CASE("config validation and first increment variance") {
    IampConfig cfg;
    cfg.delta = 0.1;
    cfg.t_star = 0.5;
    cfg.n_se_samples = 5000;
    CHECK(cfg.n_iters() == 5);

    const Mixture m = Mixture::parse("2:1.0,3:0.5");
    const auto drive = DriveFunctions::spherical(m);
    const auto cal = calibrate(m, drive, cfg);
    CHECK(cal.increment_vars[0] == doctest::Approx(m.xi_prime(0.1)).epsilon(1e-12));
    for (int l = 1; l < cal.L; ++l)
        CHECK(cal.increment_vars[l] ==
              doctest::Approx(m.xi_prime((l + 1) * 0.1) - m.xi_prime(l * 0.1)));

    IampConfig bad;
    bad.delta = 0.0;
    CHECK_THROWS(bad.n_iters());
}

TEST_CASE("spherical sensitivities match the hand-derived closed form") {
    // With u constant in x the rescaled nonlinearity is u^d_j = sqrt(delta /
    // increment_var_j) regardless of u, so
    // E[df_l/dz^j] = u^d_{j-1} - u^d_j for j <= l-1 and u^d_{l-1} at j = l.
    const Mixture m = Mixture::parse("2:1.0,3:0.6");
    IampConfig cfg;
    cfg.delta = 0.05;
    cfg.t_star = 0.4;
    cfg.n_se_samples = 2000;
    const auto drive = DriveFunctions::spherical(m);
    const auto cal = calibrate(m, drive, cfg);
    auto ud = [&](int j) { return std::sqrt(cfg.delta / cal.increment_vars[j]); };
    for (int l = 1; l < cal.L; ++l) {
        for (int j = 1; j < l; ++j)
            CHECK(cal.onsager[l][j] ==
                  doctest::Approx(m.xi_second(j * cfg.delta) * (ud(j - 1) - ud(j)))
                      .epsilon(1e-9));
        CHECK(cal.onsager[l][l] ==
              doctest::Approx(m.xi_second(l * cfg.delta) * ud(l - 1)).epsilon(1e-9));
        CHECK(cal.onsager[l][0] == 0.0);
    }
}

namespace {

// m^ell as an explicit function of the z-history of one path.
double m_of_z(const DriveFunctions& drive, const SECalibration& cal,
              const std::vector<double>& z, int ell, double delta) {
    double x = 0.0, mm = std::sqrt(delta);
    for (int j = 0; j < ell; ++j) {
        const double dz = z[j + 1] - z[j];
        mm += cal.u_delta(drive, j, x) * dz;
        x += drive.v(j * delta, x) * delta + dz;
    }
    return mm;
}

} // namespace

TEST_CASE("pathwise sensitivities agree with a bump oracle for an x-dependent drive") {
    const Mixture m = Mixture::sk();
    DriveFunctions drive;
    drive.u = [](double, double x) { return 1.0 + 0.3 * std::tanh(x); };
    drive.du_dx = [](double, double x) {
        const double c = std::cosh(x);
        return 0.3 / (c * c);
    };
    drive.v = [](double, double x) { return 0.2 * std::tanh(x); };
    drive.dv_dx = [](double, double x) {
        const double c = std::cosh(x);
        return 0.2 / (c * c);
    };

    IampConfig cfg;
    cfg.delta = 0.1;
    cfg.t_star = 0.6;
    cfg.n_se_samples = 4000;
    cfg.seed = 99;
    const auto cal = calibrate(m, drive, cfg);
    const int L = cfg.n_iters();

    // replay the same SE paths (same seed) and bump each z^j
    const auto paths = simulate_sde(m, drive, L * cfg.delta, cfg.delta,
                                    cfg.n_se_samples, cfg.seed);
    const double h = 1e-4;
    for (int l = 2; l < L; ++l) {
        for (int j = 1; j <= l; ++j) {
            double acc = 0.0;
            for (int p = 0; p < paths.n_paths(); ++p) {
                std::vector<double> z(L + 1, 0.0);
                for (int k = 0; k < L; ++k) z[k + 1] = z[k] + paths.dz[p][k];
                auto zp = z, zm = z;
                zp[j] += h;
                zm[j] -= h;
                acc += (m_of_z(drive, cal, zp, l, cfg.delta) -
                        m_of_z(drive, cal, zm, l, cfg.delta)) /
                       (2.0 * h);
            }
            const double oracle = m.xi_second(j * cfg.delta) * acc / paths.n_paths();
            CHECK(std::abs(cal.onsager[l][j] - oracle) < 1e-5);
        }
    }
}

TEST_CASE("norm law and determinism at moderate N") {
    const Mixture m = Mixture::sk();
    IampConfig cfg;
    cfg.delta = 0.05;
    cfg.t_star = 0.5;
    cfg.n_se_samples = 20000;
    const auto drive = DriveFunctions::spherical(m);
    const auto cal = calibrate(m, drive, cfg);
    const auto d = DisorderSample::sample(1000, m, 8);
    const auto run = run_iamp(d, drive, cal, cfg);
    CHECK(!run.aborted);
    for (int l = 0; l <= run.n_iters(); ++l)
        CHECK(std::abs(run.norm_m[l] - (l + 1) * cfg.delta) < 0.1);

    const auto run2 = run_iamp(d, drive, cal, cfg);
    CHECK(run.m.back() == run2.m.back()); // bitwise determinism

    const auto rep = se_check(run, cal);
    CHECK(rep.norm_law_max_dev < 0.1);
}
