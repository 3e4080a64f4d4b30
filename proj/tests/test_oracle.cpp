#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pspin/oracle.hpp"
#include "pspin/rounding.hpp"

using namespace pspin;

TEST_CASE("N=2 all-ones fixture enumerates to OPT = sqrt 2") {
    auto d = DisorderSample::sample(2, Mixture::sk(), 1);
    d.set_tensor(2, {1.0, 1.0, 1.0, 1.0});
    const auto r = brute_force_opt(d, true);
    CHECK(r.opt_value == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.histogram.size() == 4);
    // Gray visiting order ++, -+, --, +- gives sqrt(2), 0, sqrt(2), 0
    CHECK(r.histogram[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.histogram[1] == doctest::Approx(0.0));
    CHECK(r.histogram[2] == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.histogram[3] == doctest::Approx(0.0));
}

TEST_CASE("incremental energies equal from-scratch energies") {
    const Mixture m = Mixture::parse("2:1.0,3:0.7");
    const auto d = DisorderSample::sample(10, m, 12);
    const auto r = brute_force_opt(d, true);
    // re-walk the Gray sequence and recompute a sample of configs exactly
    std::vector<int8_t> sigma(10, 1);
    for (uint64_t g = 1; g < (1ULL << 10); ++g) {
        const int bit = __builtin_ctzll(g);
        sigma[bit] = static_cast<int8_t>(-sigma[bit]);
        if (g % 97 == 0) {
            const double fresh = d.energy(std::vector<double>(sigma.begin(), sigma.end()));
            CHECK(r.histogram[g] == doctest::Approx(fresh).epsilon(1e-10));
        }
    }
}

TEST_CASE("argmax attains the optimum and dominates rounded outputs") {
    const Mixture m = Mixture::sk();
    for (uint64_t seed : {1, 2, 3}) {
        const auto d = DisorderSample::sample(12, m, seed);
        const auto r = brute_force_opt(d);
        CHECK(d.energy(r.argmax.to_doubles()) == doctest::Approx(r.opt_value));
        const SpinConfig s = sequential_round(d, std::vector<double>(12, 0.3));
        CHECK(d.energy(s.to_doubles()) <= r.opt_value + 1e-12);
    }
}

TEST_CASE("even mixtures are global-flip symmetric") {
    const Mixture m = Mixture::parse("2:1.0,4:0.5");
    const auto d = DisorderSample::sample(10, m, 77);
    const auto r = brute_force_opt(d);
    auto flipped = r.argmax.to_doubles();
    for (auto& v : flipped) v = -v;
    CHECK(d.energy(flipped) == doctest::Approx(r.opt_value).epsilon(1e-12));
}

TEST_CASE("brute force refuses large N") {
    const auto d = DisorderSample::sample(23, Mixture::sk(), 1);
    CHECK_THROWS(brute_force_opt(d));
}

TEST_CASE("jacobi eigensolver on known matrices") {
    CHECK(jacobi_max_eigenvalue({2.0, 1.0, 1.0, 2.0}, 2) == doctest::Approx(3.0));
    // diag(5, -7, 1)
    CHECK(jacobi_max_eigenvalue({5, 0, 0, 0, -7, 0, 0, 0, 1}, 3) == doctest::Approx(5.0));
}

TEST_CASE("spherical 2-spin optimum approaches the GOE edge") {
    const auto d = DisorderSample::sample(300, Mixture::sk(), 5);
    const double opt = spherical_two_spin_opt(d);
    CHECK(std::abs(opt - std::sqrt(2.0)) < 0.15); // finite-N edge fluctuation

    // power iteration sees max |eigenvalue| of W^(2) = 2A/sqrt(N)
    const double pn = d.opnorm_estimate(2, 300);
    CHECK(pn >= 2.0 * opt - 0.2);
    CHECK(pn <= 2.0 * (opt + 0.3));
}
