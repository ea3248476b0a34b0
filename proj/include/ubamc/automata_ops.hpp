#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ubamc/model.hpp"

namespace ubamc {

/// Ultimately periodic word u v v v ... (v nonempty). Letters by name.
struct Lasso {
    std::vector<std::string> u;
    std::vector<std::string> v;
};

/// Result of check_unambiguous. Exactly one witness form is present when
/// unambiguous = false: a word for finite mode, a lasso for buchi mode.
/// Replaying the witness exhibits at least two distinct accepting runs.
struct AmbiguityVerdict {
    bool unambiguous = true;
    std::optional<std::vector<std::string>> witness_word;
    std::optional<Lasso> witness_lasso;
};

/// Result of check_separated. When separated = false, state_a/state_b name
/// two distinct states accepting a common word, given as witness.
struct SeparationVerdict {
    bool separated = true;
    std::string state_a, state_b;
    std::optional<std::vector<std::string>> witness_word;
    std::optional<Lasso> witness_lasso;
};

/// Preimage renaming: returns A over alphabet new_alphabet where
/// q --x--> q' iff q --lam[x]--> q' in A. lam is given parallel to
/// new_alphabet and must map into A's alphabet.
Automaton existential_rename(const Automaton& a,
                             const std::vector<std::string>& new_alphabet,
                             const std::vector<std::string>& lam);

/// Brings A onto the chain's state alphabet, the setting every product
/// construction expects: returns A unchanged when its alphabet already
/// equals M's state list; otherwise renames through M's labeling when one
/// is present; otherwise fails with the alphabet-mismatch error.
Automaton align_to_chain(const MarkovChain& m, const Automaton& a);

/// Removes useless states. Finite mode keeps states reachable from Q0 that
/// can reach F; buchi mode keeps states reachable from Q0 that can reach a
/// nontrivial SCC containing an accepting state. May return an automaton
/// with no states.
Automaton trim(const Automaton& a);

/// Self-product ambiguity test (the input is trimmed internally; accepting
/// runs survive trimming, so the verdict transfers to the input).
AmbiguityVerdict check_unambiguous(const Automaton& a);

/// Pairwise-product separateness test over all distinct state pairs. Not
/// restricted to reachable states: the definition quantifies over every
/// pair. Finite mode counts the empty word, so two accepting states are
/// never separated.
SeparationVerdict check_separated(const Automaton& a);

/// Classical subset construction (finite mode only): deterministic,
/// complete, language-preserving. States are named u0, u1, ... in BFS
/// discovery order from {Q0}; the empty subset acts as the rejecting sink.
Automaton subset_determinize(const Automaton& a);

/// Adds a rejecting sink state and routes every missing (state, letter)
/// pair to it; an automaton with no initial state gets the sink as
/// initial. Returns the input unchanged when already complete.
Automaton complete_with_sink(const Automaton& a);

/// Decides u v^omega ∈ L(A) for a buchi automaton via the finite graph of
/// (state, cycle index) configurations.
bool lasso_membership(const Automaton& a, const Lasso& l);

/// The H_{s,q} recognizer: initial {q}, fresh sink q_acc fed by a copy of
/// every s-transition into q, accepting {q_acc}. Its finite-word language
/// is the set of words ending in s that lead A from q back to q.
Automaton build_h_nfa(const Automaton& a, const std::string& letter,
                      const std::string& state);

/// The G_{s,q} recognizer over states Q×(Σ ∪ {⊥}) tracking the last letter
/// read; accepting {(q, s)}. Language: words ending in s that lead A from
/// an initial state to q.
Automaton build_g_nfa(const Automaton& a, const std::string& letter,
                      const std::string& state);

/// Union-of-G recognizer: same construction, accepting at every (q, s)
/// listed in pairs (letter index, state index).
Automaton build_union_g_nfa(const Automaton& a,
                            const std::vector<std::pair<int, int>>& pairs);

/// Language-preserving nondeterministic-but-unambiguous transform of a
/// deterministic automaton: states Q×Σ predict the next input letter.
/// D is totalized with a rejecting sink first. Throws PreconditionError
/// when D is not deterministic.
Automaton guess_next_letter_uba(const Automaton& d);

/// Successful split of an accepted lasso into x · y^omega with
/// x ∈ G_{s,q} and y ∈ H_{s,q} for an accepting state q.
struct LassoDecomposition {
    std::string letter;  // s
    std::string state;   // q ∈ F
    std::vector<std::string> x;
    std::vector<std::string> y;
};

/// Pigeonholes an accepting run of u v^omega at a configuration visited
/// infinitely often. Returns nullopt exactly when the lasso is rejected.
std::optional<LassoDecomposition> decompose_accepting_lasso(const Automaton& a,
                                                            const Lasso& l);

}  // namespace ubamc
