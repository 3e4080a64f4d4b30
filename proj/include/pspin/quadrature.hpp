#pragma once

#include <functional>
#include <vector>

namespace pspin {

// Gauss-Hermite rule for E f(G), G ~ N(0,1): E f(G) ~= sum_q weight[q] * f(node[q]).
// Nodes/weights already absorb the sqrt(2) change of variables and the
// 1/sqrt(pi) normalization, so the weights sum to 1.
struct GaussHermite {
    std::vector<double> nodes;   // standard-normal abscissae, symmetric about 0
    std::vector<double> weights; // normalized, sum to 1

    static GaussHermite make(int n);
};

// E f(sigma * G) with G standard normal.
double gauss_hermite_expect(const std::function<double(double)>& f, double sigma, int nodes);

// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10);

// Central finite difference (f(x+h) - f(x-h)) / (2h).
double finite_diff(const std::function<double(double)>& f, double x, double h);

} // namespace pspin
