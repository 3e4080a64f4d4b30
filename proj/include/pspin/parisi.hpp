#pragma once

#include <string>
#include <vector>

#include "pspin/mixture.hpp"

namespace pspin {

// Nonnegative piecewise-constant order parameter on [0,1):
// gamma(t) = values[i] for t in [knots[i], knots[i+1]), knots[0] = 0,
// knots.back() = 1.
struct GammaPath {
    std::vector<double> knots;  // size m+1
    std::vector<double> values; // size m

    GammaPath(std::vector<double> k, std::vector<double> v);

    static GammaPath zero() { return GammaPath({0.0, 1.0}, {0.0}); }

    // Uniform knots over [0, 1-eps_t] plus a tail interval [1-eps_t, 1)
    // carrying the last value; n_values parameters total.
    static GammaPath uniform(int n_values, double init, double eps_t = 0.01);

    double at(double t) const;
    size_t intervals() const { return values.size(); }
};

// Space-time discretization for the PDE solution.
struct PdeGrid {
    double x_max = 8.0;
    int n_x = 2001; // odd, symmetric grid including 0
    int gh_nodes = 61;
    std::vector<double> eval_times; // in [0,1]; knots and 0 are added automatically

    static PdeGrid standard(const Mixture& m, std::vector<double> eval_times = {});
    double dx() const { return 2.0 * x_max / (n_x - 1); }
};

// Solution of the Parisi PDE materialized on a grid: Phi, dxPhi, dxxPhi at a
// set of time slices. Construction enforces evenness of Phi exactly.
class ParisiSolution {
public:
    const std::vector<double>& times() const { return times_; }
    const PdeGrid& grid() const { return grid_; }
    const GammaPath& gamma() const { return gamma_; }
    const Mixture& mixture() const { return mixture_; }

    // Nearest materialized slice; linear interpolation in x; outside the grid
    // phi continues with slope sign(x), phi_x = sign(x), phi_xx = 0.
    double phi(double t, double x) const;
    double phi_x(double t, double x) const;
    double phi_xx(double t, double x) const;

    // d/dx phi_xx, for pathwise AMP sensitivities.
    double phi_xxx(double t, double x) const;

    double phi00() const { return phi_grid_[slice_index(0.0)][(grid_.n_x - 1) / 2]; }
    double min_phi_at_zero_time() const;

    int slice_index(double t) const; // nearest materialized time
    const std::vector<double>& phi_slice(int s) const { return phi_grid_[s]; }
    const std::vector<double>& phi_x_slice(int s) const { return phi_x_grid_[s]; }
    const std::vector<double>& phi_xx_slice(int s) const { return phi_xx_grid_[s]; }

    void export_csv(const std::string& path) const;

    friend ParisiSolution solve_parisi(const Mixture& m, const GammaPath& g, const PdeGrid& grid);

private:
    PdeGrid grid_;
    GammaPath gamma_ = GammaPath::zero();
    Mixture mixture_ = Mixture::sk();
    std::vector<double> times_; // ascending, includes 0, knots, eval times, 1
    std::vector<std::vector<double>> phi_grid_, phi_x_grid_, phi_xx_grid_;

    double interp(const std::vector<double>& slice, double x, bool is_phi, bool odd) const;
};

// Backward Cole-Hopf recursion from Phi(1,x) = |x|. Throws if the grid does
// not cover 6*sqrt(xi'(1)).
ParisiSolution solve_parisi(const Mixture& m, const GammaPath& g, const PdeGrid& grid);

// Analytic E|x + sqrt(xi'(1)-xi'(t)) G| (the gamma == 0 solution).
double closed_form_gamma_zero(const Mixture& m, double t, double x);

} // namespace pspin
