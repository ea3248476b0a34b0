#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ubamc/model.hpp"
#include "ubamc/omega_prob.hpp"
#include "ubamc/rational.hpp"
#include "ubamc/rng.hpp"

namespace ubamc {

inline constexpr const char* kToolVersion = "0.1.0";

/// Instance families the generator knows how to draw.
///  raw_uba:     random chain + random unambiguous NBA, no reference value
///  dba_derived: random chain + deterministic D; the tested automaton is
///               the guess-the-next-letter unfolding of D and the exact
///               reference value comes from prob_dba on D itself
///  functional:  chain with point-mass rows + random unambiguous NBA; the
///               exact reference value comes from prob_functional
enum class Family { raw_uba, dba_derived, functional };

std::string family_name(Family f);
Family family_from_name(const std::string& name);  // throws Error on junk

struct InstanceSpec {
    std::uint64_t seed = 0;
    int mc_states = 3;
    int aut_states = 3;  // for dba_derived this sizes D, not the unfolding
    int alphabet_size = 2;
    Rational density{1, 2};
    Family family = Family::dba_derived;
};

struct Instance {
    InstanceSpec spec;
    MarkovChain mc;
    Automaton aut;
    std::optional<Rational> known_value;
    std::string known_provenance;  // "dba_oracle", "functional_oracle", ""
    /// The deterministic automaton behind dba_derived, kept so a reported
    /// disagreement can be re-derived from scratch.
    std::optional<Automaton> oracle_input;
};

/// Deterministic generation: everything is a function of spec.seed.
Instance gen_instance(const InstanceSpec& spec);

/// Building blocks, exposed for tests that need raw material. Chains get
/// states s1..sN labeled over letters a..; `functional` forces point-mass
/// rows. Density steers which transitions exist; weights are small random
/// fractions normalized exactly.
MarkovChain random_chain(SplitMix64& rng, int states, int alphabet_size,
                         const Rational& density, bool functional);
Automaton random_automaton(SplitMix64& rng, int states, int alphabet_size,
                           const Rational& density, AcceptanceMode mode);
/// Rejection-samples random_automaton until check_unambiguous passes;
/// throws PreconditionError when attempt_cap candidates all fail.
Automaton random_unambiguous_automaton(SplitMix64& rng, int states,
                                       int alphabet_size,
                                       const Rational& density,
                                       AcceptanceMode mode,
                                       int attempt_cap = 10000);
Automaton random_deterministic_complete(SplitMix64& rng, int states,
                                        int alphabet_size);

enum class TrialVerdict { agree, disagree, flagged, not_comparable };
std::string verdict_name(TrialVerdict v);

// diagnostic estimator knobs, pinned so trial reports are comparable
inline constexpr int kDiagnosticVisits = 4;
inline constexpr int kDiagnosticHorizon = 200;
inline constexpr std::uint64_t kDiagnosticSamples = 10000;

/// Everything one differential trial produced. The serialized instance
/// travels with the verdict so a report is replayable on its own.
struct DiscrepancyReport {
    InstanceSpec spec;
    std::string mc_text;
    std::string aut_text;
    std::optional<Rational> known_value;
    std::string known_provenance;
    Rational procedure_value;
    RecurrenceTable recurrence;
    bool recurrent_set_empty = true;
    double diagnostic_estimate = 0.0;
    double diagnostic_half_width = 0.0;
    std::uint64_t diagnostic_seed = 0;
    /// empty recurrent set while the diagnostic clearly sees acceptance
    bool positive_evidence = false;
    TrialVerdict verdict = TrialVerdict::not_comparable;
    std::string note;  // size aborts and other downgrades explain themselves
};

/// Runs the withdrawn procedure against whatever reference the instance
/// carries. Exact references decide agree/disagree (exact equality, no
/// tolerance); without one the statistical diagnostic can only flag a
/// clear gap (> 0.2 with half-width < 0.05). A disagree verdict is
/// re-derived from scratch before it is returned.
DiscrepancyReport differential_trial(const Instance& inst,
                                     std::uint64_t diag_seed);

struct FuzzOutcome {
    std::uint64_t seed = 0;
    Family family = Family::dba_derived;
    std::vector<DiscrepancyReport> reports;

    int count(TrialVerdict v) const;
};

FuzzOutcome run_fuzz(std::uint64_t trials, std::uint64_t seed, Family family);

struct HuntResult {
    bool found = false;
    DiscrepancyReport witness;  // meaningful only when found
    std::uint64_t trials_run = 0;
    std::uint64_t disagreements = 0;
    std::uint64_t agreements = 0;
    std::uint64_t others = 0;
};

/// Searches dba_derived instances for the soundness failure: a disagree
/// verdict whose recurrence table is all non-recurrent while the exact
/// reference value is positive. Stops at the first hit.
HuntResult hunt_erratum_witness(std::uint64_t trials, std::uint64_t seed);

/// The word-acceptor "k-th letter from the end is a" over {a, b}; subset
/// determinization needs 2^k states, the standard blowup family.
Automaton kth_from_end_nfa(int k);

std::string to_json_string(const DiscrepancyReport& report);
std::string to_json_string(const FuzzOutcome& outcome);
std::string to_json_string(const HuntResult& result);
std::string to_json_string(const RecurrenceTable& table);

}  // namespace ubamc
