#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pspin {

// Mixture function xi(x) = sum_k c_k^2 x^k with finitely many terms,
// all degrees >= 2. Coefficients are stored un-squared (c_k).
class Mixture {
public:
    static constexpr int kDefaultMaxDegree = 6;

    // Throws std::invalid_argument on empty/degenerate input, degrees < 2,
    // non-finite coefficients, or degrees above max_degree.
    explicit Mixture(std::vector<std::pair<int, double>> coeffs,
                     int max_degree = kDefaultMaxDegree);

    // xi(t) = t^2, the Sherrington-Kirkpatrick model.
    static Mixture sk() { return Mixture({{2, 1.0}}); }
    static Mixture pure(int k) { return Mixture({{k, 1.0}}); }

    // Parse "2:1.0,4:0.5" into a mixture.
    static Mixture parse(const std::string& text);

    double xi(double x) const;
    double xi_prime(double x) const;
    double xi_second(double x) const;
    double xi_third(double x) const;

    // Exact integral of t * xi''(t) over [a, b].
    double t_xi_second_integral(double a, double b) const;

    const std::vector<std::pair<int, double>>& coeffs() const { return coeffs_; }
    int k_max() const { return k_max_; }
    std::string to_string() const;

private:
    std::vector<std::pair<int, double>> coeffs_; // sorted by degree, c_k != 0
    int k_max_ = 0;
};

} // namespace pspin
