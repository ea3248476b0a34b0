#pragma once

#include <cstdint>

namespace ubamc {

/// SplitMix64 stream. Every random choice in the workbench flows through
/// this generator so that identical seeds give bit-identical results
/// across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0, bound). bound = 0 is rejected by returning 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        // Multiply-shift reduction; the modulo bias is irrelevant at the
        // bounds used here (all far below 2^32).
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    bool coin() { return (next() & 1ULL) != 0; }

private:
    std::uint64_t state_;
};

/// The i-th derived stream seed of a master seed: the (i+1)-th output of
/// the master's SplitMix64 stream, computed in O(1) from the fixed state
/// increment. Used for per-sample and per-trial substreams; merging
/// results in index order keeps runs reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace ubamc
