#pragma once

/**
 * @file rng.hpp
 * @brief Deterministic 64-bit PRNG for reproducible sampling campaigns.
 *
 * SplitMix64 with the standard constants: state advances by
 * 0x9E3779B97F4A7C15 and the output mix multiplies by 0xBF58476D1CE4E5B9
 * and 0x94D049BB133111EB. Identical seeds produce identical streams on
 * every platform, which is what makes failing fuzz seeds replayable.
 */

#include <cstdint>

namespace hadfrac {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, bound). Modulo bias is negligible for the
    /// tiny bounds used here (degree and term counts).
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

/// Stable derivation of a per-item seed from a campaign seed and an index,
/// so item k can be regenerated without replaying items 0..k-1.
inline std::uint64_t derive_seed(std::uint64_t campaign_seed,
                                 std::uint64_t index) {
    SplitMix64 mix(campaign_seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    return mix.next();
}

}  // namespace hadfrac
