#pragma once

#include <cstdint>

namespace pspin {

// SplitMix64 finalizer. Used as the mixing core of the counter-based
// generators below so that any (key, counter) pair maps to an
// independent-looking 64-bit word.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform double in (0, 1]; never returns 0 so it is safe under log().
inline double u64_to_unit(uint64_t w) {
    return (static_cast<double>(w >> 11) + 1.0) * 0x1.0p-53;
}

// Counter-based stream: all draws are pure functions of (key, counter),
// so parallel fill and replay are deterministic.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream)
        : key_(mix64(seed ^ mix64(stream))), ctr_(0) {}

    uint64_t next_u64() { return mix64(key_ + 0x632be59bd9b4e019ULL * ++ctr_); }

    double uniform() { return u64_to_unit(next_u64()); }

    // Box-Muller; caches the second variate.
    double normal();

private:
    uint64_t key_;
    uint64_t ctr_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Stateless standard-normal entry keyed by (seed, degree, flat index).
// Distinct degrees use independent streams.
double gaussian_entry(uint64_t seed, uint32_t degree, uint64_t flat_index);

} // namespace pspin
