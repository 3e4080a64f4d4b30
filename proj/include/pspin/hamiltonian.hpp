#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pspin/mixture.hpp"

namespace pspin {

// +/-1 configuration on the hypercube.
struct SpinConfig {
    std::vector<int8_t> sigma;

    std::vector<double> to_doubles() const {
        return std::vector<double>(sigma.begin(), sigma.end());
    }
};

// One realization of the Gaussian disorder: dense asymmetric tensors G^(k)
// with i.i.d. N(0,1) entries, one per mixture degree. The symmetric tensors
// W^(k) = N^{-(k-1)/2} sum_pi (G^(k))^pi are never materialized; the
// symmetrization is folded analytically into energy/grad.
class DisorderSample {
public:
    static constexpr uint64_t kDefaultByteBudget = 4ULL << 30; // 4 GiB

    // Deterministic given (n, mixture, seed); distinct degrees use
    // independent streams. Throws std::length_error when sum_k N^k doubles
    // would exceed byte_budget.
    static DisorderSample sample(int n, const Mixture& m, uint64_t seed,
                                 uint64_t byte_budget = kDefaultByteBudget);

    int n() const { return n_; }
    const Mixture& mixture() const { return mixture_; }
    uint64_t seed() const { return seed_; }
    const std::vector<double>& tensor(int degree) const { return tensors_.at(degree); }

    // Test hook: replace G^(degree) with a fixture.
    void set_tensor(int degree, std::vector<double> g);

    // H_N(x) / N.
    double energy(const std::vector<double>& x) const;

    // grad H_N(x), length N.
    std::vector<double> grad(const std::vector<double>& x) const;

    // Multilinear Hamiltonian H~_N(x) / N (distinct-index tuples only).
    double energy_multilinear(const std::vector<double>& x) const;

    // Coefficient of x_i in the multilinear H~_N (not divided by N).
    double partial_multilinear(const std::vector<double>& x, int i) const;

    // H_N(sigma') - H_N(sigma) when coordinate i is flipped, computed from
    // partial contractions in O(N^{k-1}). sigma entries are +/-1.
    double flip_delta(const std::vector<int8_t>& sigma, int i) const;

    // Power-iteration lower bound on ||W^(k)||_op (diagnostic only).
    double opnorm_estimate(int degree, int iters) const;

    // Raw binary persistence; bit-exact round trip.
    void save(const std::string& path) const;
    static DisorderSample load(const std::string& path);

private:
    DisorderSample(int n, Mixture m, uint64_t seed)
        : n_(n), mixture_(std::move(m)), seed_(seed) {}

    int n_;
    Mixture mixture_;
    uint64_t seed_;
    std::map<int, std::vector<double>> tensors_; // degree -> flat row-major G
};

// sum_p c_p W^(p){x}: the gradient-direction contraction shared by grad()
// and the AMP iteration. Identical to grad().
std::vector<double> gradient_field(const DisorderSample& d, const std::vector<double>& x);

} // namespace pspin
