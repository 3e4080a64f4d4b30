#include "pspin/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace pspin {

BruteForceResult brute_force_opt(const DisorderSample& d, bool with_histogram) {
    const int N = d.n();
    if (N > 22) throw std::invalid_argument("brute force refused for N > 22");

    std::vector<int8_t> sigma(N, 1);
    double h = d.energy(std::vector<double>(N, 1.0)) * N;

    BruteForceResult best;
    best.opt_value = h / N;
    best.argmax.sigma = sigma;
    if (with_histogram) {
        best.histogram.reserve(1ULL << N);
        best.histogram.push_back(h / N);
    }

    const uint64_t total = 1ULL << N;
    for (uint64_t g = 1; g < total; ++g) {
        const int bit = __builtin_ctzll(g); // Gray-code flip position
        h += d.flip_delta(sigma, bit);
        sigma[bit] = static_cast<int8_t>(-sigma[bit]);
        if (with_histogram) best.histogram.push_back(h / N);
        if (h / N > best.opt_value) {
            best.opt_value = h / N;
            best.argmax.sigma = sigma;
        }
    }
    return best;
}

double jacobi_max_eigenvalue(std::vector<double> a, int n, int max_sweeps) {
    if (static_cast<int>(a.size()) != n * n) throw std::invalid_argument("bad matrix size");
    auto at = [&](int i, int j) -> double& { return a[i * n + j]; };
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-20) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    double lmax = at(0, 0);
    for (int i = 1; i < n; ++i) lmax = std::max(lmax, at(i, i));
    return lmax;
}

double spherical_two_spin_opt(const DisorderSample& d) {
    const int n = d.n();
    double c2 = 0.0;
    for (const auto& [k, c] : d.mixture().coeffs())
        if (k == 2) c2 = c;
    if (c2 == 0.0) throw std::invalid_argument("mixture has no degree-2 term");
    const auto& g = d.tensor(2);
    std::vector<double> a(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[i * n + j] = 0.5 * (g[i * n + j] + g[j * n + i]);
    return c2 * jacobi_max_eigenvalue(std::move(a), n) / std::sqrt(static_cast<double>(n));
}

} // namespace pspin
