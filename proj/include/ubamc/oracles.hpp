#pragma once

#include <cstdint>

#include "ubamc/model.hpp"
#include "ubamc/rational.hpp"

namespace ubamc {

/// Exact Büchi acceptance probability for a deterministic automaton:
/// bottom-SCC analysis of the product chain. D is completed with a
/// rejecting sink before the product, so partial automata are fine;
/// nondeterministic input is refused.
Rational prob_dba(const MarkovChain& m, const Automaton& d);

/// Exact Büchi acceptance probability when every chain state has a single
/// almost-sure successor: each start state induces one lasso word, decided
/// by lasso_membership and weighted by the initial distribution.
Rational prob_functional(const MarkovChain& m, const Automaton& a);

struct VisitsReport {
    double estimate = 0.0;
    double half_width_3sigma = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
};

/// Statistical over-approximation of Büchi acceptance: for each sampled
/// length-`horizon` prefix, a subset DP computes the maximum number of
/// F-visits over the prefix's runs, capped at k; the estimate is the
/// frequency of prefixes reaching k. An accepted trajectory's run visits
/// F infinitely often, so for horizon large enough it counts as a hit
/// with probability close to one; the converse is not claimed.
VisitsReport visits_upper_estimate(const MarkovChain& m, const Automaton& a,
                                   int k, int horizon, std::uint64_t samples,
                                   std::uint64_t seed);

}  // namespace ubamc
