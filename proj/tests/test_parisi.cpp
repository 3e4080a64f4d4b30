#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pspin/parisi.hpp"

using namespace pspin;

TEST_CASE("gamma path knot semantics") {
    const GammaPath g({0.0, 0.3, 1.0}, {0.5, 2.0});
    CHECK(g.at(0.0) == 0.5);
    CHECK(g.at(0.29) == 0.5);
    CHECK(g.at(0.3) == 2.0);
    CHECK(g.at(0.999) == 2.0);

    const GammaPath u = GammaPath::uniform(4, 0.7);
    CHECK(u.values.size() == 5); // 4 uniform intervals + tail
    CHECK(u.knots.front() == 0.0);
    CHECK(u.knots.back() == 1.0);
    CHECK(u.knots[4] == doctest::Approx(0.99));
    CHECK(u.at(0.995) == 0.7);

    CHECK_THROWS(GammaPath({0.0, 1.0}, {-1.0}));
    CHECK_THROWS(GammaPath({0.0, 0.5}, {1.0}));
}

TEST_CASE("gamma=0 SK solution matches the closed form everywhere") {
    const Mixture m = Mixture::sk();
    const PdeGrid grid = PdeGrid::standard(m, {0.0, 0.25, 0.5, 0.75});
    const ParisiSolution sol = solve_parisi(m, GammaPath::zero(), grid);

    CHECK(std::abs(sol.phi00() - 2.0 / std::sqrt(M_PI)) < 1e-3);

    double max_err = 0.0;
    for (double t : {0.0, 0.25, 0.5, 0.75}) {
        for (int j = 0; j < grid.n_x; ++j) {
            const double x = -grid.x_max + j * grid.dx();
            max_err =
                std::max(max_err, std::abs(sol.phi(t, x) - closed_form_gamma_zero(m, t, x)));
        }
    }
    CHECK(max_err < 1e-3);
}

TEST_CASE("structural invariants of Phi") {
    const Mixture m = Mixture::parse("2:1.0,4:0.5");
    const PdeGrid grid = PdeGrid::standard(m, {0.0, 0.3, 0.6, 0.9});
    const GammaPath g({0.0, 0.4, 0.8, 1.0}, {0.2, 1.5, 0.7}); // non-monotone on purpose
    const ParisiSolution sol = solve_parisi(m, g, grid);

    for (double t : {0.0, 0.3, 0.6, 0.9}) {
        double prev_phi_x = -2.0;
        for (double x = -7.0; x <= 7.0; x += 0.125) {
            const double phi = sol.phi(t, x);
            const double px = sol.phi_x(t, x);
            CHECK(phi >= std::abs(x) - 1e-6);            // Phi >= |x|
            CHECK(std::abs(px) <= 1.0 + 1e-9);           // |phi_x| <= 1
            CHECK(px >= prev_phi_x - 1e-9);              // convexity
            CHECK(sol.phi(t, -x) == doctest::Approx(phi).epsilon(1e-14)); // even
            prev_phi_x = px;
        }
        CHECK(sol.phi_x(t, 0.0) == 0.0);
    }
}

TEST_CASE("interpolation tails continue linearly") {
    const Mixture m = Mixture::sk();
    const PdeGrid grid = PdeGrid::standard(m, {0.5});
    const ParisiSolution sol = solve_parisi(m, GammaPath::zero(), grid);
    const double edge = sol.phi(0.5, grid.x_max);
    CHECK(sol.phi(0.5, grid.x_max + 2.0) == doctest::Approx(edge + 2.0));
    CHECK(sol.phi_x(0.5, grid.x_max + 2.0) == 1.0);
    CHECK(sol.phi_x(0.5, -grid.x_max - 2.0) == -1.0);
    CHECK(sol.phi_xx(0.5, grid.x_max + 2.0) == 0.0);
}

TEST_CASE("grid too small is refused") {
    const Mixture m = Mixture::parse("2:1.0,4:2.0");
    PdeGrid grid;
    grid.x_max = 4.0; // 6 sqrt(xi'(1)) = 6 sqrt(10) >> 4
    CHECK_THROWS(solve_parisi(m, GammaPath::zero(), grid));
}

TEST_CASE("solution is Lipschitz in gamma") {
    // |Phi_g1 - Phi_g2|_inf <= int xi'' |g1 - g2|
    const Mixture m = Mixture::sk();
    const PdeGrid grid = PdeGrid::standard(m, {0.0, 0.5});
    const GammaPath g1({0.0, 0.5, 1.0}, {0.3, 1.0});
    const GammaPath g2({0.0, 0.5, 1.0}, {0.5, 0.8});
    const ParisiSolution s1 = solve_parisi(m, g1, grid);
    const ParisiSolution s2 = solve_parisi(m, g2, grid);
    // int xi''|g1-g2| = 2 * (0.5*0.2 + 0.5*0.2) = 0.4
    double max_diff = 0.0;
    for (double t : {0.0, 0.5})
        for (double x = -6.0; x <= 6.0; x += 0.25)
            max_diff = std::max(max_diff, std::abs(s1.phi(t, x) - s2.phi(t, x)));
    CHECK(max_diff <= 0.4 + 1e-6);
}

TEST_CASE("piecewise-constant gamma reduces to closed form on the last interval") {
    // For t past the last nonzero knot with gamma = 0 there, Phi equals the
    // gamma=0 closed form.
    const Mixture m = Mixture::sk();
    const PdeGrid grid = PdeGrid::standard(m, {0.75});
    const GammaPath g({0.0, 0.5, 1.0}, {1.0, 0.0});
    const ParisiSolution sol = solve_parisi(m, g, grid);
    for (double x = -5.0; x <= 5.0; x += 0.5)
        CHECK(std::abs(sol.phi(0.75, x) - closed_form_gamma_zero(m, 0.75, x)) < 1e-3);
}
