#include "pspin/rounding.hpp"

#include <cmath>
#include <stdexcept>

namespace pspin {

std::vector<double> threshold(const std::vector<double>& m) {
    std::vector<double> out(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        out[i] = m[i] > 1.0 ? 1.0 : (m[i] < -1.0 ? -1.0 : m[i]);
    return out;
}

SpinConfig sequential_round(const DisorderSample& d, const std::vector<double>& m_hat,
                            std::vector<double>* mtilde_trajectory) {
    const int N = d.n();
    if (static_cast<int>(m_hat.size()) != N)
        throw std::invalid_argument("dimension mismatch");
    std::vector<double> x = m_hat;
    double ht = d.energy_multilinear(x) * N;
    if (mtilde_trajectory) {
        mtilde_trajectory->clear();
        mtilde_trajectory->push_back(ht / N);
    }
    SpinConfig out;
    out.sigma.resize(N);
    for (int i = 0; i < N; ++i) {
        const double di = d.partial_multilinear(x, i);
        const int8_t s = di >= 0.0 ? int8_t{1} : int8_t{-1};
        ht += (s - x[i]) * di;
        x[i] = s;
        out.sigma[i] = s;
        if (mtilde_trajectory) mtilde_trajectory->push_back(ht / N);
    }
    return out;
}

std::vector<double> spherical_project(const std::vector<double>& m) {
    double n2 = 0.0;
    for (double v : m) n2 += v * v;
    if (n2 <= 0.0) throw std::invalid_argument("cannot project the zero vector");
    const double scale = std::sqrt(m.size() / n2);
    std::vector<double> out(m.size());
    for (size_t i = 0; i < m.size(); ++i) out[i] = m[i] * scale;
    return out;
}

RoundingReport round_pipeline(const DisorderSample& d, const IampRun& run,
                              RoundingMode mode) {
    RoundingReport rep;
    const std::vector<double>& m = run.final_m();
    rep.energy_m = d.energy(m);

    if (mode == RoundingMode::spherical) {
        rep.m_hat = spherical_project(m);
        rep.sigma_spherical = rep.m_hat;
        rep.energy_m_hat = d.energy(rep.m_hat);
        rep.energy_sigma = rep.energy_m_hat;
        rep.energy_mtilde_m_hat = d.energy_multilinear(rep.m_hat);
        rep.energy_mtilde_sigma = rep.energy_mtilde_m_hat;
        rep.monotone = true;
        return rep;
    }

    rep.m_hat = threshold(m);
    int clipped = 0;
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i] != rep.m_hat[i]) ++clipped;
    rep.clip_fraction = static_cast<double>(clipped) / m.size();
    rep.energy_m_hat = d.energy(rep.m_hat);
    rep.energy_mtilde_m_hat = d.energy_multilinear(rep.m_hat);

    std::vector<double> traj;
    rep.sigma = sequential_round(d, rep.m_hat, &traj);
    rep.monotone = true;
    for (size_t j = 1; j < traj.size(); ++j)
        if (traj[j] < traj[j - 1] - 1e-9) rep.monotone = false;

    const auto sd = rep.sigma.to_doubles();
    rep.energy_mtilde_sigma = d.energy_multilinear(sd);
    rep.energy_sigma = d.energy(sd);
    return rep;
}

} // namespace pspin
