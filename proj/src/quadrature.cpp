#include "pspin/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace pspin {

namespace {

// Hermite polynomial (physicists') value and derivative at x, degree n,
// using the orthonormal recurrence to avoid overflow at large n.
void hermite_eval(int n, double x, double* value, double* deriv) {
    double p0 = std::pow(M_PI, -0.25); // ~H_0 orthonormal
    double p1 = std::sqrt(2.0) * x * p0;
    for (int j = 2; j <= n; ++j) {
        const double p2 = std::sqrt(2.0 / j) * x * p1 - std::sqrt((j - 1.0) / j) * p0;
        p0 = p1;
        p1 = p2;
    }
    *value = p1;
    *deriv = std::sqrt(2.0 * n) * p0;
}

} // namespace

GaussHermite GaussHermite::make(int n) {
    if (n < 1 || n > 301) throw std::invalid_argument("Gauss-Hermite order out of range");
    std::vector<double> x(n), w(n);
    // All roots lie in (-R, R) with minimum spacing pi / sqrt(2n + 1); a scan
    // step of a quarter of that brackets each positive root for bisection.
    const double R = std::sqrt(2.0 * n + 1.0) + 1.0;
    const double step = 0.25 * M_PI / std::sqrt(2.0 * n + 1.0);
    std::vector<double> pos; // positive roots, ascending
    double a = (n % 2 == 1) ? 0.5 * step : 1e-12;
    double va, dummy;
    hermite_eval(n, a, &va, &dummy);
    for (double b = a + step; a < R; a = b, b += step) {
        double vb;
        hermite_eval(n, b, &vb, &dummy);
        if (va * vb < 0.0) {
            double lo = a, hi = b, vlo = va;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                double vm;
                hermite_eval(n, mid, &vm, &dummy);
                if (vlo * vm <= 0.0)
                    hi = mid;
                else
                    lo = mid, vlo = vm;
            }
            pos.push_back(0.5 * (lo + hi));
        }
        va = vb;
    }
    if (static_cast<int>(pos.size()) != n / 2)
        throw std::runtime_error("Gauss-Hermite root scan failed");
    const int half = n / 2;
    for (int i = 0; i < half; ++i) {
        double v, d;
        hermite_eval(n, pos[i], &v, &d);
        x[half + i + (n % 2)] = pos[i];
        x[half - 1 - i] = -pos[i];
        w[half + i + (n % 2)] = 2.0 / (d * d);
        w[half - 1 - i] = w[half + i + (n % 2)];
    }
    if (n % 2 == 1) {
        double v, d;
        hermite_eval(n, 0.0, &v, &d);
        x[half] = 0.0;
        w[half] = 2.0 / (d * d);
    }

    GaussHermite gh;
    gh.nodes.resize(n);
    gh.weights.resize(n);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) wsum += w[i];
    for (int i = 0; i < n; ++i) {
        gh.nodes[i] = std::sqrt(2.0) * x[i]; // E f(G) with G ~ N(0,1)
        gh.weights[i] = w[i] / wsum;         // exact total mass 1
    }
    return gh;
}

double gauss_hermite_expect(const std::function<double(double)>& f, double sigma, int nodes) {
    const GaussHermite gh = GaussHermite::make(nodes);
    double s = 0.0;
    for (size_t q = 0; q < gh.nodes.size(); ++q) s += gh.weights[q] * f(sigma * gh.nodes[q]);
    return s;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50);
}

double finite_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace pspin
