#pragma once

#include <vector>

#include "pspin/hamiltonian.hpp"

namespace pspin {

struct BruteForceResult {
    double opt_value = 0.0; // OPT_N = max H(sigma)/N
    SpinConfig argmax;
    std::vector<double> histogram; // H/N for all 2^N configs when requested
};

// Exact maximum over {-1,+1}^N by Gray-code enumeration with incremental
// single-flip energy updates. Refuses N > 22.
BruteForceResult brute_force_opt(const DisorderSample& d, bool with_histogram = false);

// Largest eigenvalue of a dense symmetric matrix (row-major n x n) by cyclic
// Jacobi sweeps.
double jacobi_max_eigenvalue(std::vector<double> a, int n, int max_sweeps = 50);

// lambda_max of the symmetrized coupling matrix (W^(2) + W^(2)^T)/...: the
// spherical 2-spin ground state H/N = lambda_max/2 for xi(t) = t^2.
double spherical_two_spin_opt(const DisorderSample& d);

} // namespace pspin
