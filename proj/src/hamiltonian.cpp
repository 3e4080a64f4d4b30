#include "pspin/hamiltonian.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "pspin/rng.hpp"

namespace pspin {

namespace {

uint64_t ipow(uint64_t base, int e) {
    uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

void check_dim(size_t got, int n) {
    if (got != static_cast<size_t>(n)) throw std::invalid_argument("vector length != N");
}

// <G, x^{(x)k}> by full contraction.
double contract_full(const std::vector<double>& g, const std::vector<double>& x, int k, int n) {
    if (k == 2) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double xi = x[i];
            const double* row = &g[static_cast<size_t>(i) * n];
            double t = 0.0;
            for (int j = 0; j < n; ++j) t += row[j] * x[j];
            s += xi * t;
        }
        return s;
    }
    if (k == 3) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double a = x[i] * x[j];
                const double* row = &g[(static_cast<size_t>(i) * n + j) * n];
                double t = 0.0;
                for (int l = 0; l < n; ++l) t += row[l] * x[l];
                s += a * t;
            }
        return s;
    }
    if (k == 4) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double aij = x[i] * x[j];
                for (int l = 0; l < n; ++l) {
                    const double a = aij * x[l];
                    const double* row = &g[((static_cast<size_t>(i) * n + j) * n + l) * n];
                    double t = 0.0;
                    for (int m = 0; m < n; ++m) t += row[m] * x[m];
                    s += a * t;
                }
            }
        return s;
    }
    // generic odometer
    std::vector<int> idx(k, 0);
    double s = 0.0;
    const uint64_t total = ipow(n, k);
    for (uint64_t f = 0; f < total; ++f) {
        uint64_t r = f;
        double p = 1.0;
        for (int a = k - 1; a >= 0; --a) {
            p *= x[r % n];
            r /= n;
        }
        s += g[f] * p;
    }
    return s;
}

// out += contraction of G with x on all slots except one, summed over the
// free slot position. One fused pass over the tensor.
void contract_grad(const std::vector<double>& g, const std::vector<double>& x, int k, int n,
                   std::vector<double>& out) {
    if (k == 2) {
        for (int i = 0; i < n; ++i) {
            const double xi = x[i];
            const double* row = &g[static_cast<size_t>(i) * n];
            double t = 0.0;
            for (int j = 0; j < n; ++j) {
                t += row[j] * x[j];
                out[j] += row[j] * xi;
            }
            out[i] += t;
        }
        return;
    }
    if (k == 3) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double a = x[i] * x[j];
                const double* row = &g[(static_cast<size_t>(i) * n + j) * n];
                double t = 0.0;
                for (int l = 0; l < n; ++l) {
                    t += row[l] * x[l];
                    out[l] += row[l] * a;
                }
                out[i] += t * x[j];
                out[j] += t * x[i];
            }
        return;
    }
    if (k == 4) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double xij = x[i] * x[j];
                for (int l = 0; l < n; ++l) {
                    const double a = xij * x[l];
                    const double* row = &g[((static_cast<size_t>(i) * n + j) * n + l) * n];
                    double t = 0.0;
                    for (int m = 0; m < n; ++m) {
                        t += row[m] * x[m];
                        out[m] += row[m] * a;
                    }
                    out[i] += t * x[j] * x[l];
                    out[j] += t * x[i] * x[l];
                    out[l] += t * xij;
                }
            }
        return;
    }
    // generic: prefix/suffix products over the first k-1 indices
    std::vector<int> idx(k - 1, 0);
    std::vector<double> pre(k), suf(k);
    while (true) {
        pre[0] = 1.0;
        for (int a = 0; a < k - 1; ++a) pre[a + 1] = pre[a] * x[idx[a]];
        suf[k - 1] = 1.0;
        for (int a = k - 2; a >= 0; --a) suf[a] = suf[a + 1] * x[idx[a]];
        uint64_t base = 0;
        for (int a = 0; a < k - 1; ++a) base = base * n + idx[a];
        base *= n;
        const double p_all = pre[k - 1];
        double t = 0.0;
        for (int m = 0; m < n; ++m) {
            t += g[base + m] * x[m];
            out[m] += g[base + m] * p_all;
        }
        for (int a = 0; a < k - 1; ++a) out[idx[a]] += t * pre[a] * suf[a + 1];
        int a = k - 2;
        while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
        if (a < 0) break;
    }
}

// <G, x^{(x)k}> restricted to tuples with all indices distinct.
double contract_distinct(const std::vector<double>& g, const std::vector<double>& x, int k,
                         int n) {
    if (k == 2) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double* row = &g[static_cast<size_t>(i) * n];
            for (int j = 0; j < n; ++j)
                if (j != i) s += row[j] * x[i] * x[j];
        }
        return s;
    }
    if (k == 3) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double a = x[i] * x[j];
                const double* row = &g[(static_cast<size_t>(i) * n + j) * n];
                double t = 0.0;
                for (int l = 0; l < n; ++l)
                    if (l != i && l != j) t += row[l] * x[l];
                s += a * t;
            }
        return s;
    }
    if (k == 4) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double xij = x[i] * x[j];
                for (int l = 0; l < n; ++l) {
                    if (l == i || l == j) continue;
                    const double a = xij * x[l];
                    const double* row = &g[((static_cast<size_t>(i) * n + j) * n + l) * n];
                    double t = 0.0;
                    for (int m = 0; m < n; ++m)
                        if (m != i && m != j && m != l) t += row[m] * x[m];
                    s += a * t;
                }
            }
        return s;
    }
    // generic odometer with distinctness mask
    std::vector<int> idx(k, 0);
    double s = 0.0;
    while (true) {
        bool distinct = true;
        for (int a = 0; a < k && distinct; ++a)
            for (int b = a + 1; b < k; ++b)
                if (idx[a] == idx[b]) {
                    distinct = false;
                    break;
                }
        if (distinct) {
            uint64_t f = 0;
            double p = 1.0;
            for (int a = 0; a < k; ++a) {
                f = f * n + idx[a];
                p *= x[idx[a]];
            }
            s += g[f] * p;
        }
        int a = k - 1;
        while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
        if (a < 0) break;
    }
    return s;
}

// Coefficient of x_i in the distinct-index contraction: sum over slot
// positions of i, other slots distinct and != i.
double contract_distinct_partial(const std::vector<double>& g, const std::vector<double>& x,
                                 int k, int n, int i) {
    const size_t nn = static_cast<size_t>(n);
    if (k == 2) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) s += (g[nn * i + j] + g[nn * j + i]) * x[j];
        return s;
    }
    if (k == 3) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int l = 0; l < n; ++l) {
                if (l == i || l == j) continue;
                s += (g[(nn * i + j) * n + l] + g[(nn * j + i) * n + l] +
                      g[(nn * j + l) * n + i]) *
                     x[j] * x[l];
            }
        }
        return s;
    }
    if (k == 4) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int l = 0; l < n; ++l) {
                if (l == i || l == j) continue;
                const double a = x[j] * x[l];
                for (int m = 0; m < n; ++m) {
                    if (m == i || m == j || m == l) continue;
                    s += (g[((nn * i + j) * n + l) * n + m] + g[((nn * j + i) * n + l) * n + m] +
                          g[((nn * j + l) * n + i) * n + m] + g[((nn * j + l) * n + m) * n + i]) *
                         a * x[m];
                }
            }
        }
        return s;
    }
    // generic: slot position of i times odometer over the other k-1 indices
    double s = 0.0;
    for (int slot = 0; slot < k; ++slot) {
        std::vector<int> idx(k - 1, 0);
        while (true) {
            bool ok = true;
            for (int a = 0; a < k - 1 && ok; ++a) {
                if (idx[a] == i) ok = false;
                for (int b = a + 1; b < k - 1; ++b)
                    if (idx[a] == idx[b]) ok = false;
            }
            if (ok) {
                uint64_t f = 0;
                double p = 1.0;
                int pos = 0;
                for (int a = 0; a < k; ++a) {
                    if (a == slot) {
                        f = f * n + i;
                    } else {
                        f = f * n + idx[pos];
                        p *= x[idx[pos]];
                        ++pos;
                    }
                }
                s += g[f] * p;
            }
            int a = k - 2;
            while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
            if (a < 0) break;
        }
    }
    return s;
}

// sum over tuples containing i with odd multiplicity of G_T * prod(sigma_T).
// Enumerated via the first slot where i appears, so each tuple is visited once.
double odd_multiplicity_sum(const std::vector<double>& g, const std::vector<int8_t>& sigma,
                            int k, int n, int i) {
    double s = 0.0;
    std::vector<int> idx(k, 0);
    for (int first = 0; first < k; ++first) {
        // slots < first take values != i, slot first = i, slots > first free
        std::vector<int> pos; // enumerable slots
        for (int a = 0; a < k; ++a)
            if (a != first) pos.push_back(a);
        std::vector<int> cur(k, 0);
        cur[first] = i;
        std::vector<int> it(k - 1, 0);
        while (true) {
            bool valid = true;
            for (int a = 0; a < first && valid; ++a)
                if (cur[a] == i) valid = false;
            if (valid) {
                int mult = 1;
                double p = sigma[i];
                uint64_t f = 0;
                for (int a = 0; a < k; ++a) {
                    f = f * n + cur[a];
                    if (a != first) {
                        p *= sigma[cur[a]];
                        if (cur[a] == i) ++mult;
                    }
                }
                if (mult % 2 == 1) s += g[f] * p;
            }
            int a = k - 2;
            while (a >= 0) {
                if (++cur[pos[a]] == n) {
                    cur[pos[a]] = 0;
                    --a;
                } else {
                    break;
                }
            }
            if (a < 0) break;
        }
    }
    return s;
}

} // namespace

DisorderSample DisorderSample::sample(int n, const Mixture& m, uint64_t seed,
                                      uint64_t byte_budget) {
    if (n < 2) throw std::invalid_argument("N must be >= 2");
    uint64_t bytes = 0;
    for (const auto& [k, c] : m.coeffs()) bytes += ipow(n, k) * sizeof(double);
    if (bytes > byte_budget)
        throw std::length_error("disorder sample would need " + std::to_string(bytes) +
                                " bytes, budget is " + std::to_string(byte_budget));
    DisorderSample d(n, m, seed);
    for (const auto& [k, c] : m.coeffs()) {
        const uint64_t total = ipow(n, k);
        std::vector<double> g(total);
        for (uint64_t f = 0; f < total; ++f) g[f] = gaussian_entry(seed, k, f);
        d.tensors_.emplace(k, std::move(g));
    }
    return d;
}

void DisorderSample::set_tensor(int degree, std::vector<double> g) {
    if (g.size() != ipow(n_, degree)) throw std::invalid_argument("fixture tensor has wrong size");
    tensors_[degree] = std::move(g);
}

double DisorderSample::energy(const std::vector<double>& x) const {
    check_dim(x.size(), n_);
    double h = 0.0;
    for (const auto& [k, c] : mixture_.coeffs())
        h += c * std::pow(n_, -(k - 1) / 2.0) * contract_full(tensors_.at(k), x, k, n_);
    return h / n_;
}

std::vector<double> DisorderSample::grad(const std::vector<double>& x) const {
    check_dim(x.size(), n_);
    std::vector<double> out(n_, 0.0);
    for (const auto& [k, c] : mixture_.coeffs()) {
        std::vector<double> part(n_, 0.0);
        contract_grad(tensors_.at(k), x, k, n_, part);
        const double scale = c * std::pow(n_, -(k - 1) / 2.0);
        for (int i = 0; i < n_; ++i) out[i] += scale * part[i];
    }
    return out;
}

double DisorderSample::energy_multilinear(const std::vector<double>& x) const {
    check_dim(x.size(), n_);
    double h = 0.0;
    for (const auto& [k, c] : mixture_.coeffs())
        h += c * std::pow(n_, -(k - 1) / 2.0) * contract_distinct(tensors_.at(k), x, k, n_);
    return h / n_;
}

double DisorderSample::partial_multilinear(const std::vector<double>& x, int i) const {
    check_dim(x.size(), n_);
    if (i < 0 || i >= n_) throw std::out_of_range("coordinate index out of range");
    double s = 0.0;
    for (const auto& [k, c] : mixture_.coeffs())
        s += c * std::pow(n_, -(k - 1) / 2.0) *
             contract_distinct_partial(tensors_.at(k), x, k, n_, i);
    return s;
}

double DisorderSample::flip_delta(const std::vector<int8_t>& sigma, int i) const {
    double s = 0.0;
    for (const auto& [k, c] : mixture_.coeffs())
        s += c * std::pow(n_, -(k - 1) / 2.0) *
             (-2.0) * odd_multiplicity_sum(tensors_.at(k), sigma, k, n_, i);
    return s;
}

double DisorderSample::opnorm_estimate(int degree, int iters) const {
    if (iters < 1) throw std::invalid_argument("iters must be >= 1");
    const auto& g = tensors_.at(degree);
    const int k = degree;
    CounterRng rng(seed_ ^ 0x5ee1, 99);
    std::vector<double> u(n_);
    for (int i = 0; i < n_; ++i) u[i] = rng.normal();
    double best = 0.0;
    for (int it = 0; it < iters; ++it) {
        double norm = 0.0;
        for (double v : u) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (double& v : u) v /= norm;
        std::vector<double> y(n_, 0.0);
        contract_grad(g, u, k, n_, y);
        // y.u = k <G, u^{(x)k}>, and <W, u^{(x)k}> = N^{-(k-1)/2} k! <G, u^{(x)k}>,
        // so <W, u^{(x)k}> = (k-1)! N^{-(k-1)/2} y.u.
        double dot = 0.0;
        for (int i = 0; i < n_; ++i) dot += y[i] * u[i];
        double fact = 1.0;
        for (int a = 2; a < k; ++a) fact *= a;
        const double val = fact * std::pow(n_, -(k - 1) / 2.0) * dot;
        best = std::max(best, std::abs(val));
        u = y;
    }
    return best;
}

void DisorderSample::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write("PSPN", 4);
    const uint32_t version = 1, n = static_cast<uint32_t>(n_);
    const uint32_t nterms = static_cast<uint32_t>(mixture_.coeffs().size());
    f.write(reinterpret_cast<const char*>(&version), 4);
    f.write(reinterpret_cast<const char*>(&n), 4);
    f.write(reinterpret_cast<const char*>(&nterms), 4);
    for (const auto& [k, c] : mixture_.coeffs()) {
        const uint32_t ku = static_cast<uint32_t>(k);
        f.write(reinterpret_cast<const char*>(&ku), 4);
        f.write(reinterpret_cast<const char*>(&c), 8);
    }
    f.write(reinterpret_cast<const char*>(&seed_), 8);
    for (const auto& [k, g] : tensors_)
        f.write(reinterpret_cast<const char*>(g.data()), g.size() * sizeof(double));
    if (!f) throw std::runtime_error("write failed: " + path);
}

DisorderSample DisorderSample::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (std::memcmp(magic, "PSPN", 4) != 0) throw std::runtime_error("bad magic in " + path);
    uint32_t version = 0, n = 0, nterms = 0;
    f.read(reinterpret_cast<char*>(&version), 4);
    f.read(reinterpret_cast<char*>(&n), 4);
    f.read(reinterpret_cast<char*>(&nterms), 4);
    if (version != 1) throw std::runtime_error("unsupported version");
    std::vector<std::pair<int, double>> coeffs(nterms);
    for (auto& [k, c] : coeffs) {
        uint32_t ku = 0;
        f.read(reinterpret_cast<char*>(&ku), 4);
        f.read(reinterpret_cast<char*>(&c), 8);
        k = static_cast<int>(ku);
    }
    uint64_t seed = 0;
    f.read(reinterpret_cast<char*>(&seed), 8);
    DisorderSample d(static_cast<int>(n), Mixture(coeffs), seed);
    for (const auto& [k, c] : d.mixture_.coeffs()) {
        std::vector<double> g(ipow(n, k));
        f.read(reinterpret_cast<char*>(g.data()), g.size() * sizeof(double));
        d.tensors_.emplace(k, std::move(g));
    }
    if (!f) throw std::runtime_error("truncated file: " + path);
    return d;
}

std::vector<double> gradient_field(const DisorderSample& d, const std::vector<double>& x) {
    return d.grad(x);
}

} // namespace pspin
