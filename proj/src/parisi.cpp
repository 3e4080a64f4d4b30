#include "pspin/parisi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "pspin/quadrature.hpp"

namespace pspin {

namespace {
constexpr double kGammaZeroCutoff = 1e-10; // below this use the linear (a=0) branch
}

GammaPath::GammaPath(std::vector<double> k, std::vector<double> v)
    : knots(std::move(k)), values(std::move(v)) {
    if (knots.size() < 2 || values.size() + 1 != knots.size())
        throw std::invalid_argument("gamma path needs m+1 knots for m values");
    if (knots.front() != 0.0 || knots.back() != 1.0)
        throw std::invalid_argument("gamma knots must span [0, 1]");
    for (size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1]))
            throw std::invalid_argument("gamma knots must be strictly increasing");
    for (double a : values)
        if (!(a >= 0.0) || !std::isfinite(a))
            throw std::invalid_argument("gamma values must be finite and >= 0");
}

GammaPath GammaPath::uniform(int n_values, double init, double eps_t) {
    if (n_values < 1) throw std::invalid_argument("need at least one gamma value");
    std::vector<double> knots, values;
    const double h = (1.0 - eps_t) / n_values;
    for (int i = 0; i <= n_values; ++i) knots.push_back(i * h);
    knots.push_back(1.0); // tail interval [1-eps_t, 1) carries the last value
    for (int i = 0; i < n_values + 1; ++i) values.push_back(init);
    return GammaPath(std::move(knots), std::move(values));
}

double GammaPath::at(double t) const {
    if (t < 0.0 || t >= 1.0) return values.back();
    const auto it = std::upper_bound(knots.begin(), knots.end(), t);
    const size_t i = static_cast<size_t>(it - knots.begin());
    return values[std::min(i == 0 ? 0 : i - 1, values.size() - 1)];
}

PdeGrid PdeGrid::standard(const Mixture& m, std::vector<double> eval_times) {
    PdeGrid g;
    g.x_max = std::max(8.0, 6.0 * std::sqrt(m.xi_prime(1.0)));
    g.eval_times = std::move(eval_times);
    return g;
}

int ParisiSolution::slice_index(double t) const {
    const auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.end()) return static_cast<int>(times_.size()) - 1;
    if (it == times_.begin()) return 0;
    const size_t i = static_cast<size_t>(it - times_.begin());
    return (times_[i] - t < t - times_[i - 1]) ? static_cast<int>(i) : static_cast<int>(i - 1);
}

double ParisiSolution::interp(const std::vector<double>& slice, double x, bool is_phi,
                              bool odd) const {
    const double xm = grid_.x_max;
    if (x > xm) return is_phi ? slice.back() + (x - xm) : (odd ? 1.0 : 0.0);
    if (x < -xm) return is_phi ? slice.front() + (-x - xm) : (odd ? -1.0 : 0.0);
    const double dx = grid_.dx();
    const double u = (x + xm) / dx;
    const int j = std::min(static_cast<int>(u), grid_.n_x - 2);
    const double w = u - j;
    return slice[j] * (1.0 - w) + slice[j + 1] * w;
}

double ParisiSolution::phi(double t, double x) const {
    return interp(phi_grid_[slice_index(t)], x, true, false);
}
double ParisiSolution::phi_x(double t, double x) const {
    return interp(phi_x_grid_[slice_index(t)], x, false, true);
}
double ParisiSolution::phi_xx(double t, double x) const {
    return interp(phi_xx_grid_[slice_index(t)], x, false, false);
}

double ParisiSolution::phi_xxx(double t, double x) const {
    const double dx = grid_.dx();
    const int s = slice_index(t);
    const double up = interp(phi_xx_grid_[s], x + dx, false, false);
    const double dn = interp(phi_xx_grid_[s], x - dx, false, false);
    return (up - dn) / (2.0 * dx);
}

double ParisiSolution::min_phi_at_zero_time() const {
    const auto& slice = phi_grid_[slice_index(0.0)];
    return *std::min_element(slice.begin(), slice.end());
}

void ParisiSolution::export_csv(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "t,x,phi,phi_x,phi_xx\n";
    for (size_t s = 0; s < times_.size(); ++s)
        for (int j = 0; j < grid_.n_x; ++j) {
            const double x = -grid_.x_max + j * grid_.dx();
            f << times_[s] << "," << x << "," << phi_grid_[s][j] << "," << phi_x_grid_[s][j]
              << "," << phi_xx_grid_[s][j] << "\n";
        }
}

ParisiSolution solve_parisi(const Mixture& m, const GammaPath& g, const PdeGrid& grid) {
    if (grid.n_x < 3 || grid.n_x % 2 == 0)
        throw std::invalid_argument("n_x must be odd and >= 3");
    if (grid.x_max < 6.0 * std::sqrt(m.xi_prime(1.0)) - 1e-12)
        throw std::invalid_argument("grid x_max too small: need >= 6 sqrt(xi'(1))");

    ParisiSolution sol;
    sol.grid_ = grid;
    sol.gamma_ = g;
    sol.mixture_ = m;

    std::vector<double> times = grid.eval_times;
    times.insert(times.end(), g.knots.begin(), g.knots.end());
    times.push_back(0.0);
    times.push_back(1.0);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                times.end());
    if (times.front() < 0.0 || times.back() > 1.0 + 1e-12)
        throw std::invalid_argument("eval times outside [0, 1]");
    sol.times_ = times;

    const int nx = grid.n_x;
    const int center = (nx - 1) / 2;
    const double dx = grid.dx();
    const size_t nt = times.size();
    sol.phi_grid_.assign(nt, std::vector<double>(nx));
    sol.phi_x_grid_.assign(nt, std::vector<double>(nx));
    sol.phi_xx_grid_.assign(nt, std::vector<double>(nx));

    // terminal slice at t = 1
    {
        auto& phi = sol.phi_grid_[nt - 1];
        auto& phx = sol.phi_x_grid_[nt - 1];
        for (int j = 0; j < nx; ++j) {
            const double x = -grid.x_max + j * dx;
            phi[j] = std::abs(x);
            phx[j] = (x > 0.0) ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        }
    }

    const GaussHermite gh = GaussHermite::make(grid.gh_nodes);
    const int nq = static_cast<int>(gh.nodes.size());
    std::vector<double> pv(nq), pxv(nq);

    // map each materialized time (except t=1) to the gamma interval it lies in
    for (int s = static_cast<int>(nt) - 2; s >= 0; --s) {
        const double t = times[s];
        const auto it = std::upper_bound(g.knots.begin(), g.knots.end(), t);
        const size_t iv = static_cast<size_t>(it - g.knots.begin()); // t in [knots[iv-1], knots[iv])
        const double t_right = g.knots[iv];
        const double a = g.values[iv - 1];
        const int src = sol.slice_index(t_right);
        const double var = m.xi_prime(t_right) - m.xi_prime(t);

        auto& phi = sol.phi_grid_[s];
        auto& phx = sol.phi_x_grid_[s];
        const auto& sp = sol.phi_grid_[src];
        const auto& spx = sol.phi_x_grid_[src];

        if (var <= 1e-15) {
            phi = sp;
            phx = spx;
        } else if (src == static_cast<int>(nt) - 1) {
            // source is the terminal |x|: the tilted Gaussian smoothing has a
            // closed form, which keeps the kink out of the quadrature
            const double sd = std::sqrt(var);
            auto norm_cdf = [](double y) { return 0.5 * std::erfc(-y / std::sqrt(2.0)); };
            for (int j = center; j < nx; ++j) {
                const double x = -grid.x_max + j * dx;
                if (a > kGammaZeroCutoff) {
                    const double cp = norm_cdf(x / sd + a * sd);
                    const double cm = std::exp(-2.0 * a * x) * norm_cdf(-x / sd + a * sd);
                    phi[j] = 0.5 * a * var + x + std::log(cp + cm) / a;
                    phx[j] = (cp - cm) / (cp + cm);
                } else {
                    phi[j] = x * std::erf(x / (sd * std::sqrt(2.0))) +
                             sd * std::sqrt(2.0 / M_PI) * std::exp(-x * x / (2.0 * var));
                    phx[j] = std::erf(x / (sd * std::sqrt(2.0)));
                }
            }
            for (int d = 1; d <= center; ++d) {
                phi[center - d] = phi[center + d];
                phx[center - d] = -phx[center + d];
            }
            phx[center] = 0.0;
        } else {
            const double sd = std::sqrt(var);
            for (int j = center; j < nx; ++j) {
                const double x = -grid.x_max + j * dx;
                for (int q = 0; q < nq; ++q) {
                    const double y = x + sd * gh.nodes[q];
                    pv[q] = sol.interp(sp, y, true, false);
                    pxv[q] = sol.interp(spx, y, false, true);
                }
                if (a > kGammaZeroCutoff) {
                    double mx = -1e300;
                    for (int q = 0; q < nq; ++q) mx = std::max(mx, a * pv[q]);
                    double den = 0.0, numx = 0.0;
                    for (int q = 0; q < nq; ++q) {
                        const double w = gh.weights[q] * std::exp(a * pv[q] - mx);
                        den += w;
                        numx += w * pxv[q];
                    }
                    phi[j] = (mx + std::log(den)) / a;
                    phx[j] = numx / den;
                } else {
                    double sphi = 0.0, sphx = 0.0;
                    for (int q = 0; q < nq; ++q) {
                        sphi += gh.weights[q] * pv[q];
                        sphx += gh.weights[q] * pxv[q];
                    }
                    phi[j] = sphi;
                    phx[j] = sphx;
                }
            }
            // evenness of Phi by construction
            for (int d = 1; d <= center; ++d) {
                phi[center - d] = phi[center + d];
                phx[center - d] = -phx[center + d];
            }
            phx[center] = 0.0;
        }
    }

    // phi_xx from central differences of phi_x, one-sided at edges
    for (size_t s = 0; s < nt; ++s) {
        const auto& phx = sol.phi_x_grid_[s];
        auto& pxx = sol.phi_xx_grid_[s];
        for (int j = 1; j + 1 < nx; ++j) pxx[j] = (phx[j + 1] - phx[j - 1]) / (2.0 * dx);
        pxx[0] = (phx[1] - phx[0]) / dx;
        pxx[nx - 1] = (phx[nx - 1] - phx[nx - 2]) / dx;
    }
    return sol;
}

double closed_form_gamma_zero(const Mixture& m, double t, double x) {
    const double var = m.xi_prime(1.0) - m.xi_prime(t);
    if (var <= 0.0) return std::abs(x);
    const double sd = std::sqrt(var);
    return x * std::erf(x / (sd * std::sqrt(2.0))) +
           sd * std::sqrt(2.0 / M_PI) * std::exp(-x * x / (2.0 * var));
}

} // namespace pspin
