#include "ubamc/sampling.hpp"

#include "ubamc/errors.hpp"

namespace ubamc {

std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound) {
    if (bound == 0) throw InternalError("uniform_below(0)");
    const std::uint64_t rem = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        std::uint64_t u = rng.next();
        // accept u < 2^64 - rem; the rejected top slice is what would bias
        // the modulus
        if (rem == 0 || u < (0 - rem)) return u % bound;
    }
}

namespace {

// Uniform mpz in [0, bound) by masking to bit length and rejecting.
mpz_class mpz_below(SplitMix64& rng, const mpz_class& bound) {
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    for (;;) {
        mpz_class z = 0;
        for (std::size_t w = 0; w < words; ++w) {
            mpz_class word(static_cast<unsigned long>(rng.next() >> 32));
            word <<= 32;
            word |= static_cast<unsigned long>(rng.next() & 0xffffffffULL);
            z |= word << (64 * w);
        }
        mpz_class mask = (mpz_class(1) << bits) - 1;
        z &= mask;
        if (z < bound) return z;
    }
}

}  // namespace

RowSampler::RowSampler(const std::vector<Rational>& row) {
    mpz_class lcm = 1;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j].is_zero()) continue;
        targets_.push_back(static_cast<int>(j));
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), row[j].den().get_mpz_t());
    }
    if (targets_.empty())
        throw PreconditionError("cannot sample from an all-zero row");
    big_ = !lcm.fits_ulong_p();
    mpz_class acc = 0;
    for (int t : targets_) {
        acc += row[t].num() * (lcm / row[t].den());
        if (big_)
            big_cum_.push_back(acc);
        else
            cum_.push_back(acc.get_ui());
    }
    if (acc != lcm) throw PreconditionError("sampled row does not sum to 1");
    if (big_)
        big_scale_ = lcm;
    else
        scale_ = lcm.get_ui();
}

int RowSampler::sample(SplitMix64& rng) const {
    if (!big_) {
        const std::uint64_t r = uniform_below(rng, scale_);
        for (std::size_t i = 0; i < cum_.size(); ++i)
            if (r < cum_[i]) return targets_[i];
    } else {
        const mpz_class r = mpz_below(rng, big_scale_);
        for (std::size_t i = 0; i < big_cum_.size(); ++i)
            if (r < big_cum_[i]) return targets_[i];
    }
    throw InternalError("row sampler fell off its own distribution");
}

ChainSampler::ChainSampler(const MarkovChain& m) {
    rows_.reserve(m.size());
    for (int s = 0; s < m.size(); ++s) rows_.emplace_back(m.trans[s]);
    init_ = RowSampler(m.init);
}

}  // namespace ubamc
