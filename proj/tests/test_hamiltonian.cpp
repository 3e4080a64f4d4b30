#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "pspin/hamiltonian.hpp"
#include "pspin/quadrature.hpp"
#include "pspin/rng.hpp"

using namespace pspin;

namespace {

DisorderSample allones_n2() {
    auto d = DisorderSample::sample(2, Mixture::sk(), 1);
    d.set_tensor(2, {1.0, 1.0, 1.0, 1.0});
    return d;
}

} // namespace

TEST_CASE("N=2 all-ones fixture matches hand computation") {
    const auto d = allones_n2();
    // H(x)/N = (x1+x2)^2 / (2 sqrt 2)
    CHECK(d.energy({1.0, 1.0}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.energy({1.0, -1.0}) == doctest::Approx(0.0));
    // H~(x)/N = sqrt(2) x1 x2 / 2
    CHECK(d.energy_multilinear({1.0, 1.0}) == doctest::Approx(std::sqrt(2.0) / 2.0));
    // coefficient of x1 is sqrt(2) * x2
    CHECK(d.partial_multilinear({0.3, -0.2}, 0) ==
          doctest::Approx(-0.2 * std::sqrt(2.0)));
}

TEST_CASE("gradient matches finite differences") {
    const Mixture m = Mixture::parse("2:1.0,3:0.7,4:0.5");
    const auto d = DisorderSample::sample(6, m, 3);
    CounterRng rng(4, 0);
    std::vector<double> x(6);
    for (auto& v : x) v = rng.uniform() * 2.0 - 1.0;
    const auto g = d.grad(x);
    for (int i = 0; i < 6; ++i) {
        const double fd = finite_diff(
            [&](double xi) {
                auto y = x;
                y[i] = xi;
                return d.energy(y) * 6.0;
            },
            x[i], 1e-6);
        CHECK(std::abs(fd - g[i]) < 1e-5);
    }
}

TEST_CASE("multilinear hamiltonian is affine in each coordinate") {
    const Mixture m = Mixture::parse("2:1.0,3:0.8");
    const auto d = DisorderSample::sample(7, m, 9);
    CounterRng rng(5, 0);
    std::vector<double> x(7);
    for (auto& v : x) v = rng.uniform() * 2.0 - 1.0;
    for (int i = 0; i < 7; ++i) {
        const double coef = d.partial_multilinear(x, i);
        auto y = x;
        y[i] = 0.0;
        const double base = d.energy_multilinear(y) * 7.0;
        for (double a : {-1.0, 0.4, 2.0}) {
            y[i] = a;
            CHECK(d.energy_multilinear(y) * 7.0 ==
                  doctest::Approx(base + a * coef).epsilon(1e-12));
        }
    }
}

TEST_CASE("flip_delta equals recomputation") {
    const Mixture m = Mixture::parse("2:1.0,3:0.5,4:0.25");
    const auto d = DisorderSample::sample(8, m, 17);
    std::vector<int8_t> sigma(8, 1);
    CounterRng rng(2, 0);
    for (auto& s : sigma) s = rng.uniform() < 0.5 ? int8_t{-1} : int8_t{1};
    for (int i = 0; i < 8; ++i) {
        std::vector<double> x0(sigma.begin(), sigma.end());
        auto x1 = x0;
        x1[i] = -x1[i];
        const double expect = (d.energy(x1) - d.energy(x0)) * 8.0;
        CHECK(d.flip_delta(sigma, i) == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("sampling is deterministic in the seed") {
    const Mixture m = Mixture::parse("2:1.0,3:0.5");
    const auto a = DisorderSample::sample(5, m, 123);
    const auto b = DisorderSample::sample(5, m, 123);
    const auto c = DisorderSample::sample(5, m, 124);
    CHECK(a.tensor(2) == b.tensor(2));
    CHECK(a.tensor(3) == b.tensor(3));
    CHECK(a.tensor(2) != c.tensor(2));
}

TEST_CASE("byte budget refusal and validation") {
    CHECK_THROWS_AS(DisorderSample::sample(400, Mixture::parse("4:1.0"), 1),
                    std::length_error);
    CHECK_THROWS_AS(DisorderSample::sample(1, Mixture::sk(), 1), std::invalid_argument);
}

TEST_CASE("binary save/load round trip is bit exact") {
    const Mixture m = Mixture::parse("2:1.0,3:0.5");
    const auto d = DisorderSample::sample(6, m, 55);
    const std::string path = "disorder_roundtrip.pspn";
    d.save(path);
    const auto e = DisorderSample::load(path);
    CHECK(e.n() == d.n());
    CHECK(e.seed() == d.seed());
    CHECK(e.tensor(2) == d.tensor(2));
    CHECK(e.tensor(3) == d.tensor(3));
    std::remove(path.c_str());
}

TEST_CASE("gap between H and multilinear H scales sublinearly") {
    // |H - H~| at random points in [-1,1]^N should grow like sqrt(N log N),
    // far below linear in N.
    const Mixture m = Mixture::sk();
    for (int n : {100, 200, 400}) {
        const auto d = DisorderSample::sample(n, m, 31);
        CounterRng rng(6, n);
        double max_gap = 0.0;
        for (int r = 0; r < 5; ++r) {
            std::vector<double> x(n);
            for (auto& v : x) v = rng.uniform() * 2.0 - 1.0;
            max_gap = std::max(max_gap,
                               std::abs(d.energy(x) - d.energy_multilinear(x)) * n);
        }
        CHECK(max_gap < 10.0 * std::sqrt(n * std::log(n)));
    }
}

TEST_CASE("power iteration tracks the 2-tensor operator norm scale") {
    const auto d = DisorderSample::sample(300, Mixture::sk(), 77);
    const double est = d.opnorm_estimate(2, 200);
    // GOE edge: max |<W^(2), u x u>| over unit u -> 2 sqrt 2 ~ 2.83
    CHECK(est > 2.0);
    CHECK(est < 3.2);
}
