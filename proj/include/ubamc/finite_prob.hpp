#pragma once

#include <cstdint>
#include <string>

#include "ubamc/model.hpp"
#include "ubamc/rational.hpp"

namespace ubamc {

enum class FiniteMethod { lemma1, subset_fallback };

/// prob_nfa outcome with the evaluation route that produced it. The linear
/// system counts expected accepting first entries rather than trajectories
/// with at least one; the two coincide exactly when no trajectory can
/// carry two distinct first-entry runs, which is what the overlap scan
/// decides. Instances with overlap are answered through the subset route,
/// which measures trajectories directly.
struct FiniteProbResult {
    Rational value;
    FiniteMethod method = FiniteMethod::lemma1;
    std::string note;  // reason for the fallback, empty on the system route
};

/// Probability that some prefix of the trajectory is accepted by the
/// unambiguous NFA A. Refuses ambiguous automata (the equation system is
/// only derived for unambiguous input); the error carries a witness word.
/// A is aligned to M's state alphabet first (see align_to_chain).
FiniteProbResult prob_nfa_detail(const MarkovChain& m, const Automaton& a);
Rational prob_nfa(const MarkovChain& m, const Automaton& a);

/// Independent exact reference: determinize A along the trajectory and
/// solve reachability of "subset hits F" on the resulting finite chain.
/// Exponential worst case, no unambiguity requirement.
Rational prob_nfa_subset_oracle(const MarkovChain& m, const Automaton& a);

/// Decides whether some positive-probability trajectory carries two
/// distinct accepting first-entry runs of A (trimmed, finite mode).
/// Exposed for tests; prob_nfa_detail runs it internally.
bool has_entry_run_overlap(const MarkovChain& m, const Automaton& trimmed);

struct SimulationReport {
    double estimate = 0.0;
    double half_width_3sigma = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t undecided = 0;  // per-sample step cap hits
};

inline constexpr std::uint64_t kSimulationStepCap = 1000000;

/// Monte Carlo check of prob_nfa: walks the chain while tracking the
/// reachable automaton subset, stopping on acceptance or on a subset-chain
/// state from which no acceptance is reachable. Sample i uses the derived
/// seed stream i of `seed`, so reports are bit-identical across runs. The
/// caller should pass a trimmed automaton; untrimmed input only slows the
/// rejection detection down.
SimulationReport simulate_prefix_acceptance(const MarkovChain& m,
                                            const Automaton& a,
                                            std::uint64_t samples,
                                            std::uint64_t seed);

}  // namespace ubamc
