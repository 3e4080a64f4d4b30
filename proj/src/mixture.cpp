#include "pspin/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pspin {

Mixture::Mixture(std::vector<std::pair<int, double>> coeffs, int max_degree) {
    for (const auto& [k, c] : coeffs) {
        if (k < 2) throw std::invalid_argument("mixture degree must be >= 2");
        if (k > max_degree)
            throw std::invalid_argument("mixture degree exceeds max_degree (finite mixtures only)");
        if (!std::isfinite(c)) throw std::invalid_argument("mixture coefficient must be finite");
        if (c != 0.0) coeffs_.emplace_back(k, c);
    }
    if (coeffs_.empty()) throw std::invalid_argument("mixture needs at least one nonzero coefficient");
    std::sort(coeffs_.begin(), coeffs_.end());
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (coeffs_[i].first == coeffs_[i - 1].first)
            throw std::invalid_argument("duplicate mixture degree");
    k_max_ = coeffs_.back().first;
}

Mixture Mixture::parse(const std::string& text) {
    std::vector<std::pair<int, double>> coeffs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto pos = item.find(':');
        if (pos == std::string::npos)
            throw std::invalid_argument("mixture term must look like 'degree:coeff'");
        coeffs.emplace_back(std::stoi(item.substr(0, pos)), std::stod(item.substr(pos + 1)));
    }
    return Mixture(std::move(coeffs));
}

double Mixture::xi(double x) const {
    double s = 0.0;
    for (const auto& [k, c] : coeffs_) s += c * c * std::pow(x, k);
    return s;
}

double Mixture::xi_prime(double x) const {
    double s = 0.0;
    for (const auto& [k, c] : coeffs_) s += c * c * k * std::pow(x, k - 1);
    return s;
}

double Mixture::xi_second(double x) const {
    double s = 0.0;
    for (const auto& [k, c] : coeffs_) s += c * c * k * (k - 1) * std::pow(x, k - 2);
    return s;
}

double Mixture::xi_third(double x) const {
    double s = 0.0;
    for (const auto& [k, c] : coeffs_) {
        if (k >= 3) s += c * c * k * (k - 1) * (k - 2) * std::pow(x, k - 3);
    }
    return s;
}

double Mixture::t_xi_second_integral(double a, double b) const {
    // integral of t xi''(t) = sum c^2 k (k-1) t^{k-1}  ->  sum c^2 (k-1) t^k
    double s = 0.0;
    for (const auto& [k, c] : coeffs_)
        s += c * c * (k - 1) * (std::pow(b, k) - std::pow(a, k));
    return s;
}

std::string Mixture::to_string() const {
    std::ostringstream os;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << ",";
        os << coeffs_[i].first << ":" << coeffs_[i].second;
    }
    return os.str();
}

} // namespace pspin
