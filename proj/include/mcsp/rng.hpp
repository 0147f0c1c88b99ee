#pragma once

#include <cstdint>

namespace mcsp {

// splitmix64; fixed algorithm so seeded runs are reproducible across platforms
// (std::uniform_int_distribution is implementation-defined, so we avoid it).
class Rng {
public:
    explicit Rng(uint64_t seed = 0x9e3779b97f4a7c15ull) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound)
    uint64_t next_below(uint64_t bound) {
        // multiply-shift; bias is negligible for our bounds and fully deterministic
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * bound) >> 64);
    }

    // uniform integer in [lo, hi] inclusive
    int64_t next_int(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(next_below(static_cast<uint64_t>(hi - lo + 1)));
    }

    // uniform in [0, 1)
    double next_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double next_real(double lo, double hi) { return lo + (hi - lo) * next_real(); }

private:
    uint64_t state_;
};

}  // namespace mcsp
