#pragma once

#include <cstdint>
#include <vector>

#include "ubamc/model.hpp"
#include "ubamc/rng.hpp"

namespace ubamc {

/// Exactly uniform draw in [0, bound), bound >= 1, by rejection on the raw
/// 64-bit stream (no modulo bias).
std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound);

/// Exact categorical sampler for one probability row: the row is rescaled
/// to a common denominator and a uniform integer below it selects the
/// successor. No floating point anywhere, so runs are bit-reproducible.
class RowSampler {
public:
    RowSampler() = default;
    explicit RowSampler(const std::vector<Rational>& row);

    int sample(SplitMix64& rng) const;

private:
    std::vector<int> targets_;
    // fast path: common denominator fits in 64 bits
    std::vector<std::uint64_t> cum_;
    std::uint64_t scale_ = 0;
    // slow path for huge denominators
    std::vector<mpz_class> big_cum_;
    mpz_class big_scale_;
    bool big_ = false;
};

/// Per-state samplers for a chain plus one for the initial distribution.
class ChainSampler {
public:
    explicit ChainSampler(const MarkovChain& m);

    int initial(SplitMix64& rng) const { return init_.sample(rng); }
    int step(int state, SplitMix64& rng) const {
        return rows_[state].sample(rng);
    }

private:
    std::vector<RowSampler> rows_;
    RowSampler init_;
};

}  // namespace ubamc
