#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ubamc/rational.hpp"

namespace ubamc {

/// Finite Markov chain over named states. Transition rows and the initial
/// distribution sum to exactly 1; only strictly positive entries are
/// stored as nonzero. Declaration order of `states` is the canonical index
/// order used everywhere (matrices, products, reports).
struct MarkovChain {
    std::vector<std::string> states;
    std::vector<std::vector<Rational>> trans;  // dense |S| x |S|
    std::vector<Rational> init;                // |S|
    /// Optional state labeling into an automaton alphabet; when present it
    /// is total. labels[i] is the letter of states[i].
    std::optional<std::vector<std::string>> labels;

    int index_of(const std::string& state) const;  // -1 when absent
    int size() const { return static_cast<int>(states.size()); }
};

/// Validates the stochasticity invariants; throws PreconditionError naming
/// the offending state or entry.
void validate_markov_chain(const MarkovChain& m);

enum class AcceptanceMode { finite, buchi };

/// Shared structure for NFAs and Büchi automata. Transition targets are
/// kept sorted and duplicate-free; `initial` and `accepting` are index
/// masks over `states`. Immutable after construction by convention.
struct Automaton {
    AcceptanceMode mode = AcceptanceMode::finite;
    std::vector<std::string> alphabet;
    std::vector<std::string> states;
    std::vector<bool> initial;    // |Q|
    std::vector<bool> accepting;  // |Q|
    /// delta[q][a] = sorted target state indices.
    std::vector<std::vector<std::vector<int>>> delta;

    int num_states() const { return static_cast<int>(states.size()); }
    int num_letters() const { return static_cast<int>(alphabet.size()); }
    int state_index(const std::string& name) const;   // -1 when absent
    int letter_index(const std::string& name) const;  // -1 when absent

    std::vector<int> initial_states() const;
    std::vector<int> accepting_states() const;
    std::size_t num_transitions() const;

    /// Adds q --letter--> target, keeping the target list sorted and
    /// duplicate-free (set semantics).
    void add_transition(int q, int letter, int target);
};

/// Structurally well-formed automaton builder; throws PreconditionError on
/// out-of-range indices or malformed shape.
void validate_automaton(const Automaton& a);

/// |Q0| <= 1 and at most one successor per (state, letter).
bool is_deterministic(const Automaton& a);

/// Every (state, letter) has at least one successor.
bool is_complete(const Automaton& a);

/// Extended transition function on state subsets: the image of U under the
/// word w (letter indices), by the inductive one-letter rule. U and the
/// result are sorted index vectors.
std::vector<int> delta_hat(const Automaton& a, const std::vector<int>& subset,
                           const std::vector<int>& word);

/// Same, with letters and states given by name. Throws PreconditionError
/// on a letter outside the alphabet.
std::vector<std::string> delta_hat(const Automaton& a,
                                   const std::vector<std::string>& subset,
                                   const std::vector<std::string>& word);

/// Bit-length of the binary representations of a chain and an automaton.
struct SizeMetrics {
    std::uint64_t mc_size = 0;
    std::uint64_t aut_size = 0;
};

SizeMetrics size_metrics(const MarkovChain& m, const Automaton& a);

// Subset-as-bitmask helpers. Automata handled by subset-based operations
// are capped at 64 states.
std::uint64_t subset_to_mask(const Automaton& a, const std::vector<int>& subset);
std::vector<int> mask_to_subset(std::uint64_t mask);
std::uint64_t initial_mask(const Automaton& a);
std::uint64_t accepting_mask(const Automaton& a);
/// Per (letter) table of per-state target masks: step[a][q].
std::vector<std::vector<std::uint64_t>> mask_steps(const Automaton& a);
std::uint64_t mask_step(const std::vector<std::vector<std::uint64_t>>& steps,
                        std::uint64_t subset, int letter);

}  // namespace ubamc
