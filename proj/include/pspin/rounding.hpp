#pragma once

#include <vector>

#include "pspin/hamiltonian.hpp"
#include "pspin/iamp.hpp"

namespace pspin {

enum class RoundingMode { ising, spherical };

struct RoundingReport {
    std::vector<double> m_hat; // clipped iterate (ising) or projection input
    SpinConfig sigma;          // ising output; empty for spherical
    std::vector<double> sigma_spherical;
    double energy_m = 0.0;            // H(m^{l*})/N
    double energy_m_hat = 0.0;        // H(m_hat)/N
    double energy_mtilde_m_hat = 0.0; // H~(m_hat)/N
    double energy_mtilde_sigma = 0.0; // H~(sigma)/N
    double energy_sigma = 0.0;        // H(output)/N
    double clip_fraction = 0.0;
    bool monotone = false; // H~ nondecreasing across the sequential pass
};

// Coordinatewise clip to [-1, 1].
std::vector<double> threshold(const std::vector<double>& m);

// Sequential coordinate maximization of the multilinear Hamiltonian in index
// order; sign(0) = +1. If mtilde_trajectory is non-null it receives H~/N
// after every coordinate (N+1 entries including the start).
SpinConfig sequential_round(const DisorderSample& d, const std::vector<double>& m_hat,
                            std::vector<double>* mtilde_trajectory = nullptr);

// sqrt(N) * m / ||m||; throws on the zero vector.
std::vector<double> spherical_project(const std::vector<double>& m);

RoundingReport round_pipeline(const DisorderSample& d, const IampRun& run,
                              RoundingMode mode);

} // namespace pspin
