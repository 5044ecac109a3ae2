#pragma once

#include <cstdint>

namespace qrlab {

// splitmix64 finalizer: invertible 64-bit mixer with good avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// splitmix64 generator. State advances by the golden-ratio increment; each
// output is the finalizer of the new state.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        return mix64(state);
    }

    // Uniform draw in [0, bound) using 128 random bits reduced mod bound,
    // so the bias is below 2^-64 for any bound < 2^64.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t hi = next(), lo = next();
        const unsigned __int128 x = (static_cast<unsigned __int128>(hi) << 64) | lo;
        return static_cast<std::uint64_t>(x % bound);
    }
};

// Seeding discipline: every trial draws from its own stream, derived from
// the master seed by index, so results are independent of how trials are
// scheduled across threads and any prefix of trials is reproducible.
struct RngSpec {
    std::uint64_t master_seed = 0;

    SplitMix64 stream(std::uint64_t trial_index) const {
        return SplitMix64{mix64(master_seed ^ trial_index)};
    }
};

} // namespace qrlab
