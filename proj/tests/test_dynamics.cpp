#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pspin/dynamics.hpp"

using namespace pspin;

namespace {

DriveFunctions zero_drift_unit_u() {
    DriveFunctions d;
    d.u = [](double, double) { return 1.0; };
    d.v = [](double, double) { return 0.0; };
    d.du_dx = [](double, double) { return 0.0; };
    d.dv_dx = [](double, double) { return 0.0; };
    return d;
}

} // namespace

TEST_CASE("driftless paths are time-changed Brownian motion") {
    const Mixture m = Mixture::sk(); // xi(t) = t^2, xi'(1) = 2
    const auto drive = zero_drift_unit_u();
    const auto paths = simulate_sde(m, drive, 1.0, 0.02, 100000, 5);
    const int L = paths.n_steps();
    double s = 0.0, s2 = 0.0;
    for (const auto& p : paths.x) {
        s += p[L];
        s2 += p[L] * p[L];
    }
    const int np = paths.n_paths();
    const double mean = s / np, var = s2 / np - mean * mean;
    // Var X_1 = xi'(1) = 2; SE of the variance ~ var sqrt(2/np)
    CHECK(std::abs(mean) < 3.0 * std::sqrt(2.0 / np));
    CHECK(std::abs(var - 2.0) < 3.0 * 2.0 * std::sqrt(2.0 / np));
}

TEST_CASE("martingale isometry for the spherical drive") {
    const Mixture m = Mixture::sk();
    const auto drive = DriveFunctions::spherical(m); // u = 1/sqrt(2)
    const auto paths = simulate_sde(m, drive, 1.0, 0.02, 100000, 6);
    const auto mart = martingale_paths(paths, drive);
    const int L = paths.n_steps();
    for (int j : {L / 2, L}) {
        double s2 = 0.0;
        for (const auto& p : mart) s2 += p[j] * p[j];
        const double emp = s2 / paths.n_paths();
        const double t = paths.times[j];
        CHECK(std::abs(emp - t) < 3.0 * t * std::sqrt(2.0 / paths.n_paths()) + 1e-9);
    }
}

TEST_CASE("martingale increments are uncorrelated with the prefix") {
    const Mixture m = Mixture::sk();
    const auto drive = DriveFunctions::spherical(m);
    const auto paths = simulate_sde(m, drive, 1.0, 0.05, 100000, 7);
    const auto mart = martingale_paths(paths, drive);
    const int np = paths.n_paths();
    const int j = 10;
    double c = 0.0;
    for (int p = 0; p < np; ++p)
        c += std::tanh(mart[p][j]) * (mart[p][j + 5] - mart[p][j]);
    CHECK(std::abs(c / np) < 3.0 / std::sqrt(static_cast<double>(np)));
}

TEST_CASE("energy functional hits the closed forms") {
    {
        const Mixture m = Mixture::sk();
        const auto drive = DriveFunctions::spherical(m);
        const auto paths = simulate_sde(m, drive, 1.0, 0.01, 200, 8);
        CHECK(std::abs(energy_functional(m, drive, paths) - std::sqrt(2.0)) < 1e-3);
    }
    {
        const Mixture m = Mixture::pure(4); // xi'' = 12 t^2, integral sqrt 3
        const auto drive = DriveFunctions::spherical(m);
        const auto paths = simulate_sde(m, drive, 1.0, 0.005, 200, 9);
        // u = 1/sqrt(12 t^2) diverges at t = 0; the trapezoid stays integrable
        // because xi'' u = sqrt(12) t.
        CHECK(std::abs(energy_functional(m, drive, paths) - std::sqrt(3.0)) < 1e-3);
    }
}

TEST_CASE("step variance uses exact xi-prime increments") {
    const Mixture m = Mixture::parse("2:1.0,3:0.5");
    const auto drive = zero_drift_unit_u();
    const auto paths = simulate_sde(m, drive, 0.5, 0.1, 50000, 10);
    for (int j = 0; j < paths.n_steps(); ++j) {
        double s2 = 0.0;
        for (const auto& p : paths.dz) s2 += p[j] * p[j];
        const double expect = m.xi_prime((j + 1) * 0.1) - m.xi_prime(j * 0.1);
        CHECK(std::abs(s2 / paths.n_paths() - expect) <
              4.0 * expect * std::sqrt(2.0 / paths.n_paths()));
    }
}

TEST_CASE("common random numbers reproduce bitwise") {
    const Mixture m = Mixture::sk();
    const auto drive = zero_drift_unit_u();
    const auto normals = sample_normals(100, 50, 77);
    const auto a = simulate_sde_with_normals(m, drive, 1.0, 0.02, normals);
    const auto b = simulate_sde_with_normals(m, drive, 1.0, 0.02, normals);
    CHECK(a.x == b.x);
}
