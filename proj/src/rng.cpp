#include "pspin/rng.hpp"

#include <cmath>

namespace pspin {

double CounterRng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

double gaussian_entry(uint64_t seed, uint32_t degree, uint64_t flat_index) {
    const uint64_t key = mix64(seed ^ mix64(0x9e3779b9ULL + degree));
    const uint64_t w1 = mix64(key + 2 * flat_index);
    const uint64_t w2 = mix64(key + 2 * flat_index + 1);
    const double u1 = u64_to_unit(w1);
    const double u2 = u64_to_unit(w2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace pspin
