#pragma once

#include <string>
#include <vector>

#include "ubamc/finite_prob.hpp"
#include "ubamc/model.hpp"
#include "ubamc/rational.hpp"

namespace ubamc {

/// One row of the recurrence analysis: the pair (s, q) with s a chain
/// state and q an accepting automaton state, and the exact probability
/// that the trajectory restarted at s (initial distribution P(s,.)) has a
/// prefix in H_{s,q}, the language of words ending in s that lead the
/// automaton from q back to q.
struct RecurrenceRow {
    std::string mc_state;
    std::string aut_state;
    Rational prob_h;
    bool recurrent = false;      // prob_h = 1 exactly, no tolerance
    bool h_unambiguous = false;  // runtime check of the H recognizer
    FiniteMethod method_used = FiniteMethod::lemma1;
};

struct RecurrenceTable {
    std::vector<RecurrenceRow> rows;  // exactly S x F, s-major

    int recurrent_count() const;
};

enum class UnionMethod { subset, lemma1 };

/// The string every serialization of UbaVerdict must carry.
inline constexpr const char* kSoundnessFlag = "WITHDRAWN — see erratum";

/// Result of the recurrent-pair procedure. The procedure itself is
/// withdrawn: the value is NOT Pr of acceptance in general, only the
/// measure of the union of the G languages over recurrent pairs. The
/// soundness flag travels with the value into every report.
struct UbaVerdict {
    Rational value;
    RecurrenceTable recurrence;
    std::string soundness_flag = kSoundnessFlag;
    UnionMethod union_method = UnionMethod::subset;
};

/// Builds the full recurrence table. Refuses ambiguous Büchi input; the
/// per-row H recognizers get their own ambiguity check, falling back to
/// the subset oracle when it fails (method_used records the route that
/// actually produced the row, including overlap fallbacks inside
/// prob_nfa).
RecurrenceTable recurrent_pairs(const MarkovChain& m, const Automaton& a);

/// Evaluates the union of G_{s,q} over recurrent (s,q) exactly. Default
/// route determinizes along the trajectory; requesting lemma1 builds the
/// union-G recognizer and uses the equation system when that recognizer
/// passes the ambiguity check, cross-checking against the subset value on
/// every run and falling back (with union_method = subset) otherwise.
UbaVerdict prob_uba_recurrent(const MarkovChain& m, const Automaton& a,
                              UnionMethod requested = UnionMethod::subset);

}  // namespace ubamc
