#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pspin/rng.hpp"
#include "pspin/rounding.hpp"

using namespace pspin;

TEST_CASE("threshold clips coordinatewise") {
    CHECK(threshold({1.5, -0.2, -3.0}) == std::vector<double>{1.0, -0.2, -1.0});
    const std::vector<double> feasible{0.5, -1.0, 0.0, 1.0};
    CHECK(threshold(feasible) == feasible);
}

TEST_CASE("sequential rounding on the N=2 hand fixture") {
    auto d = DisorderSample::sample(2, Mixture::sk(), 1);
    d.set_tensor(2, {1.0, 1.0, 1.0, 1.0}); // H~(x) = sqrt(2) x1 x2
    std::vector<double> traj;
    const SpinConfig s = sequential_round(d, {0.3, -0.2}, &traj);
    CHECK(s.sigma == std::vector<int8_t>{-1, -1});
    CHECK(traj.back() == doctest::Approx(std::sqrt(2.0) / 2.0));
    for (size_t j = 1; j < traj.size(); ++j) CHECK(traj[j] >= traj[j - 1] - 1e-12);
}

TEST_CASE("tie rule sends zero partials to +1") {
    auto d = DisorderSample::sample(3, Mixture::sk(), 1);
    d.set_tensor(2, std::vector<double>(9, 0.0));
    const SpinConfig s = sequential_round(d, {-0.5, 0.2, 0.0});
    CHECK(s.sigma == std::vector<int8_t>{1, 1, 1});
}

TEST_CASE("repeated rounding reaches a fixed point without losing energy") {
    const Mixture m = Mixture::parse("2:1.0,3:0.5");
    const auto d = DisorderSample::sample(10, m, 21);
    SpinConfig s = sequential_round(d, std::vector<double>(10, 0.1));
    double e = d.energy_multilinear(s.to_doubles());
    bool fixed = false;
    for (int pass = 0; pass < 50 && !fixed; ++pass) {
        const SpinConfig s2 = sequential_round(d, s.to_doubles());
        const double e2 = d.energy_multilinear(s2.to_doubles());
        CHECK(e2 >= e - 1e-12);
        fixed = (s2.sigma == s.sigma);
        s = s2;
        e = e2;
    }
    CHECK(fixed);
}

TEST_CASE("monotone trajectory on random instances") {
    const Mixture m = Mixture::parse("2:1.0,4:0.5");
    const auto d = DisorderSample::sample(30, m, 33);
    CounterRng rng(3, 0);
    std::vector<double> mh(30);
    for (auto& v : mh) v = rng.uniform() * 2.0 - 1.0;
    std::vector<double> traj;
    sequential_round(d, mh, &traj);
    for (size_t j = 1; j < traj.size(); ++j) CHECK(traj[j] >= traj[j - 1] - 1e-12);
}

TEST_CASE("spherical projection") {
    const auto out = spherical_project({3.0, 4.0});
    double n2 = 0.0;
    for (double v : out) n2 += v * v;
    CHECK(n2 / 2.0 == doctest::Approx(1.0).epsilon(1e-14));
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(spherical_project(ones) == ones);
    CHECK_THROWS(spherical_project({0.0, 0.0}));
}

TEST_CASE("round_pipeline report invariants") {
    const Mixture m = Mixture::sk();
    const auto d = DisorderSample::sample(50, m, 44);
    IampRun run;
    run.cfg.delta = 0.1;
    CounterRng rng(5, 0);
    std::vector<double> mvec(50);
    for (auto& v : mvec) v = 1.5 * (rng.uniform() * 2.0 - 1.0);
    run.m.push_back(mvec);

    const RoundingReport rep = round_pipeline(d, run, RoundingMode::ising);
    CHECK(rep.monotone);
    CHECK(rep.energy_mtilde_sigma >= rep.energy_mtilde_m_hat - 1e-12);
    CHECK(rep.clip_fraction > 0.0);
    for (double v : rep.m_hat) CHECK(std::abs(v) <= 1.0);
    for (int8_t s : rep.sigma.sigma) CHECK((s == 1 || s == -1));

    const RoundingReport sph = round_pipeline(d, run, RoundingMode::spherical);
    double n2 = 0.0;
    for (double v : sph.sigma_spherical) n2 += v * v;
    CHECK(n2 / 50.0 == doctest::Approx(1.0).epsilon(1e-12));
}
