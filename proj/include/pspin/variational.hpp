#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pspin/dynamics.hpp"
#include "pspin/mixture.hpp"
#include "pspin/parisi.hpp"

namespace pspin {

struct VariationalOptions {
    int n_paths = 100000;
    int max_iters = 150;
    double tol = 5e-3;   // sup-norm of the per-unit-length projected gradient
    double delta = 0.01; // SDE step for the gradient Monte Carlo
    double eps_t = 0.01;
    double step0 = 0.0; // 0 -> 0.5 / xi''(1)
    uint64_t seed = 7;
    int gh_nodes = 61;
    int n_x = 2001;
};

struct VariationalReport {
    GammaPath gamma_star = GammaPath::zero();
    double value = 0.0;
    std::vector<std::pair<double, double>> stationarity_profile; // (t, E[phi_x^2] - t)
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    bool nondecreasing = false; // soft no-overlap-gap diagnostic
    std::vector<double> value_history;
};

struct SphericalGamma {
    GammaPath gamma = GammaPath::zero();
    double value = 0.0;
    bool truncated = false; // gamma* singular at 0 (xi''(0) = 0)
};

// 1/2 sum_i a_i int_{t_i}^{t_{i+1}} t xi''(t) dt, integrated analytically.
double gamma_correction(const Mixture& m, const GammaPath& g);

// P(gamma) = Phi(0,0) - gamma_correction.
double parisi_functional(const Mixture& m, const GammaPath& g, const PdeGrid& grid);

// Per-interval components 1/2 int xi''(t)(E[phi_x(t,X_t)^2] - t) dt estimated
// by Monte Carlo over paths plus piecewise-linear quadrature in t. The paths
// must be driven by the drift induced by sol.
std::vector<double> parisi_gradient(const ParisiSolution& sol, const SdePaths& paths);

// Projected gradient descent over the knot values (projection max(., 0), no
// monotonicity constraint) with backtracking line search and common random
// numbers across iterations.
VariationalReport minimize_parisi(const Mixture& m, int n_knots,
                                  const VariationalOptions& opts = {});

// Closed-form minimizer for the sphere: gamma*(t) = -d/dt xi''(t)^{-1/2}
// sampled at interval midpoints; value = int_0^1 sqrt(xi'') dt by adaptive
// quadrature.
SphericalGamma spherical_gamma(const Mixture& m, int n_knots = 40, double eps_t = 0.01);

// (V(0,0), P(gamma)) computed through algebraically independent routes; the
// two must agree to numerical tolerance.
std::pair<double, double> hjb_value_check(const Mixture& m, const GammaPath& g,
                                          const ParisiSolution& sol);

} // namespace pspin
