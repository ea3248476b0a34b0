#include "ubamc/harness.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <utility>

#include "ubamc/automata_ops.hpp"
#include "ubamc/errors.hpp"
#include "ubamc/oracles.hpp"
#include "ubamc/parse.hpp"
#include "ubamc/sampling.hpp"

namespace ubamc {

namespace {

const char* const kLetterNames[] = {"a", "b", "c"};

bool density_pass(SplitMix64& rng, const Rational& density) {
    // compare an exact uniform draw on a fine grid against the knob
    return Rational(static_cast<long>(uniform_below(rng, 1000000)), 1000000) <
           density;
}

std::vector<Rational> random_distribution(SplitMix64& rng, int n,
                                          const Rational& density) {
    std::vector<Rational> row(n);
    bool any = false;
    for (int j = 0; j < n; ++j) {
        if (!density_pass(rng, density)) continue;
        row[j] = Rational(1 + static_cast<long>(uniform_below(rng, 8)),
                          1 + static_cast<long>(uniform_below(rng, 8)));
        any = true;
    }
    if (!any) row[uniform_below(rng, n)] = Rational(1);
    Rational sum;
    for (const Rational& r : row) sum += r;
    for (Rational& r : row) r /= sum;
    return row;
}

void check_spec_bounds(const InstanceSpec& spec) {
    if (spec.mc_states < 1 || spec.mc_states > 6)
        throw PreconditionError("instance chain size must be in 1..6");
    if (spec.aut_states < 1 || spec.aut_states > 6)
        throw PreconditionError("instance automaton size must be in 1..6");
    if (spec.alphabet_size < 1 || spec.alphabet_size > 3)
        throw PreconditionError("instance alphabet size must be in 1..3");
    if (spec.density.sign() <= 0 || !spec.density.in_unit_interval())
        throw PreconditionError("density must be in (0, 1]");
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::raw_uba: return "raw_uba";
        case Family::dba_derived: return "dba_derived";
        case Family::functional: return "functional";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "raw_uba") return Family::raw_uba;
    if (name == "dba_derived") return Family::dba_derived;
    if (name == "functional") return Family::functional;
    throw Error("unknown instance family '" + name + "'");
}

std::string verdict_name(TrialVerdict v) {
    switch (v) {
        case TrialVerdict::agree: return "agree";
        case TrialVerdict::disagree: return "disagree";
        case TrialVerdict::flagged: return "flagged";
        case TrialVerdict::not_comparable: return "not_comparable";
    }
    return "?";
}

MarkovChain random_chain(SplitMix64& rng, int states, int alphabet_size,
                         const Rational& density, bool functional) {
    MarkovChain m;
    for (int i = 0; i < states; ++i)
        m.states.push_back("s" + std::to_string(i + 1));
    std::vector<std::string> labels;
    for (int i = 0; i < states; ++i)
        labels.push_back(kLetterNames[uniform_below(rng, alphabet_size)]);
    m.labels = std::move(labels);
    for (int i = 0; i < states; ++i) {
        if (functional) {
            std::vector<Rational> row(states);
            row[uniform_below(rng, states)] = Rational(1);
            m.trans.push_back(std::move(row));
        } else {
            m.trans.push_back(random_distribution(rng, states, density));
        }
    }
    m.init = random_distribution(rng, states, density);
    validate_markov_chain(m);
    return m;
}

Automaton random_automaton(SplitMix64& rng, int states, int alphabet_size,
                           const Rational& density, AcceptanceMode mode) {
    Automaton a;
    a.mode = mode;
    for (int l = 0; l < alphabet_size; ++l) a.alphabet.push_back(kLetterNames[l]);
    for (int q = 0; q < states; ++q)
        a.states.push_back("q" + std::to_string(q + 1));
    a.initial.assign(states, false);
    a.accepting.assign(states, false);
    a.delta.assign(states,
                   std::vector<std::vector<int>>(alphabet_size));
    a.initial[uniform_below(rng, states)] = true;
    for (int q = 0; q < states; ++q) {
        if (!a.initial[q] && uniform_below(rng, 8) == 0) a.initial[q] = true;
        if (uniform_below(rng, 2) == 0) a.accepting[q] = true;
        for (int l = 0; l < alphabet_size; ++l)
            for (int t = 0; t < states; ++t)
                if (density_pass(rng, density)) a.add_transition(q, l, t);
    }
    validate_automaton(a);
    return a;
}

Automaton random_unambiguous_automaton(SplitMix64& rng, int states,
                                       int alphabet_size,
                                       const Rational& density,
                                       AcceptanceMode mode, int attempt_cap) {
    for (int attempt = 0; attempt < attempt_cap; ++attempt) {
        Automaton a =
            random_automaton(rng, states, alphabet_size, density, mode);
        if (check_unambiguous(a).unambiguous) return a;
    }
    throw PreconditionError("no unambiguous automaton found within " +
                            std::to_string(attempt_cap) + " attempts");
}

Automaton random_deterministic_complete(SplitMix64& rng, int states,
                                        int alphabet_size) {
    Automaton d;
    d.mode = AcceptanceMode::buchi;
    for (int l = 0; l < alphabet_size; ++l) d.alphabet.push_back(kLetterNames[l]);
    for (int q = 0; q < states; ++q)
        d.states.push_back("d" + std::to_string(q + 1));
    d.initial.assign(states, false);
    d.accepting.assign(states, false);
    d.delta.assign(states, std::vector<std::vector<int>>(alphabet_size));
    d.initial[uniform_below(rng, states)] = true;
    for (int q = 0; q < states; ++q) {
        if (uniform_below(rng, 2) == 0) d.accepting[q] = true;
        for (int l = 0; l < alphabet_size; ++l)
            d.add_transition(q, l, uniform_below(rng, states));
    }
    validate_automaton(d);
    return d;
}

Instance gen_instance(const InstanceSpec& spec) {
    check_spec_bounds(spec);
    SplitMix64 rng(spec.seed);
    Instance inst;
    inst.spec = spec;
    switch (spec.family) {
        case Family::raw_uba:
            inst.mc = random_chain(rng, spec.mc_states, spec.alphabet_size,
                                   spec.density, false);
            inst.aut = random_unambiguous_automaton(
                rng, spec.aut_states, spec.alphabet_size, spec.density,
                AcceptanceMode::buchi);
            break;
        case Family::dba_derived: {
            inst.mc = random_chain(rng, spec.mc_states, spec.alphabet_size,
                                   spec.density, false);
            Automaton d = random_deterministic_complete(rng, spec.aut_states,
                                                        spec.alphabet_size);
            inst.known_value = prob_dba(inst.mc, d);
            inst.known_provenance = "dba_oracle";
            inst.aut = guess_next_letter_uba(d);
            inst.oracle_input = std::move(d);
            break;
        }
        case Family::functional:
            inst.mc = random_chain(rng, spec.mc_states, spec.alphabet_size,
                                   spec.density, true);
            inst.aut = random_unambiguous_automaton(
                rng, spec.aut_states, spec.alphabet_size, spec.density,
                AcceptanceMode::buchi);
            inst.known_value = prob_functional(inst.mc, inst.aut);
            inst.known_provenance = "functional_oracle";
            break;
    }
    return inst;
}

namespace {

// A disagree verdict is strong enough to warrant recomputing both sides
// from scratch before reporting it.
void confirm_disagreement(const Instance& inst, const DiscrepancyReport& rep) {
    Rational proc2 = prob_uba_recurrent(inst.mc, inst.aut).value;
    if (proc2 != rep.procedure_value)
        throw InternalError(
            "procedure value did not reproduce on re-evaluation");
    Rational known2;
    if (inst.oracle_input)
        known2 = prob_dba(inst.mc, *inst.oracle_input);
    else if (inst.known_provenance == "functional_oracle")
        known2 = prob_functional(inst.mc, inst.aut);
    else
        return;  // externally supplied reference, nothing to re-derive
    if (known2 != *rep.known_value)
        throw InternalError(
            "reference value did not reproduce on re-evaluation");
}

}  // namespace

DiscrepancyReport differential_trial(const Instance& inst,
                                     std::uint64_t diag_seed) {
    DiscrepancyReport rep;
    rep.spec = inst.spec;
    rep.mc_text = serialize_markov_chain(inst.mc);
    rep.aut_text = serialize_automaton(inst.aut);
    rep.known_value = inst.known_value;
    rep.known_provenance = inst.known_provenance;
    rep.diagnostic_seed = diag_seed;

    bool size_abort = false;
    try {
        UbaVerdict v = prob_uba_recurrent(inst.mc, inst.aut);
        rep.procedure_value = v.value;
        rep.recurrence = std::move(v.recurrence);
        rep.recurrent_set_empty = rep.recurrence.recurrent_count() == 0;
    } catch (const SizeLimitError& e) {
        size_abort = true;
        rep.note = std::string("size abort: ") + e.what();
    }

    VisitsReport diag =
        visits_upper_estimate(inst.mc, inst.aut, kDiagnosticVisits,
                              kDiagnosticHorizon, kDiagnosticSamples, diag_seed);
    rep.diagnostic_estimate = diag.estimate;
    rep.diagnostic_half_width = diag.half_width_3sigma;
    rep.positive_evidence = !size_abort && rep.recurrent_set_empty &&
                            diag.estimate - diag.half_width_3sigma > 0.0;

    if (size_abort) {
        rep.verdict = TrialVerdict::not_comparable;
    } else if (rep.known_value) {
        rep.verdict = (*rep.known_value == rep.procedure_value)
                          ? TrialVerdict::agree
                          : TrialVerdict::disagree;
    } else {
        double gap =
            std::fabs(diag.estimate - rep.procedure_value.to_double());
        rep.verdict = (gap > 0.2 && diag.half_width_3sigma < 0.05)
                          ? TrialVerdict::flagged
                          : TrialVerdict::not_comparable;
    }

    if (rep.verdict == TrialVerdict::disagree) confirm_disagreement(inst, rep);
    return rep;
}

int FuzzOutcome::count(TrialVerdict v) const {
    int n = 0;
    for (const DiscrepancyReport& r : reports)
        if (r.verdict == v) ++n;
    return n;
}

FuzzOutcome run_fuzz(std::uint64_t trials, std::uint64_t seed, Family family) {
    FuzzOutcome out;
    out.seed = seed;
    out.family = family;
    for (std::uint64_t i = 0; i < trials; ++i) {
        std::uint64_t trial_seed = derive_seed(seed, i);
        SplitMix64 trng(trial_seed);
        InstanceSpec spec;
        spec.seed = derive_seed(trial_seed, 1);
        spec.family = family;
        spec.mc_states = 2 + static_cast<int>(uniform_below(trng, 4));
        spec.aut_states =
            family == Family::dba_derived
                ? 1 + static_cast<int>(uniform_below(trng, 3))
                : 2 + static_cast<int>(uniform_below(trng, 4));
        spec.alphabet_size = 2 + static_cast<int>(uniform_below(trng, 2));
        spec.density =
            Rational(1 + static_cast<long>(uniform_below(trng, 2)), 2);
        Instance inst = gen_instance(spec);
        out.reports.push_back(
            differential_trial(inst, derive_seed(trial_seed, 2)));
    }
    return out;
}

HuntResult hunt_erratum_witness(std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw PreconditionError("trials must be at least 1");
    HuntResult res;
    for (std::uint64_t i = 0; i < trials; ++i) {
        std::uint64_t trial_seed = derive_seed(seed, i);
        SplitMix64 trng(trial_seed);
        InstanceSpec spec;
        spec.seed = derive_seed(trial_seed, 1);
        spec.family = Family::dba_derived;
        spec.mc_states = 2 + static_cast<int>(uniform_below(trng, 3));
        spec.aut_states = 1 + static_cast<int>(uniform_below(trng, 3));
        spec.alphabet_size = 2;
        spec.density = Rational(1, 2);
        Instance inst = gen_instance(spec);
        DiscrepancyReport rep =
            differential_trial(inst, derive_seed(trial_seed, 2));
        ++res.trials_run;
        switch (rep.verdict) {
            case TrialVerdict::disagree: ++res.disagreements; break;
            case TrialVerdict::agree: ++res.agreements; break;
            default: ++res.others; break;
        }
        if (rep.verdict == TrialVerdict::disagree && rep.recurrent_set_empty &&
            inst.known_value && inst.known_value->sign() > 0) {
            res.found = true;
            res.witness = std::move(rep);
            return res;
        }
    }
    return res;
}

Automaton kth_from_end_nfa(int k) {
    if (k < 1) throw PreconditionError("k must be at least 1");
    Automaton a;
    a.mode = AcceptanceMode::finite;
    a.alphabet = {"a", "b"};
    for (int i = 0; i <= k; ++i) a.states.push_back("w" + std::to_string(i));
    a.initial.assign(k + 1, false);
    a.initial[0] = true;
    a.accepting.assign(k + 1, false);
    a.accepting[k] = true;
    a.delta.assign(k + 1, std::vector<std::vector<int>>(2));
    a.add_transition(0, 0, 0);
    a.add_transition(0, 1, 0);
    a.add_transition(0, 0, 1);  // guess: this a is the k-th from the end
    for (int i = 1; i < k; ++i) {
        a.add_transition(i, 0, i + 1);
        a.add_transition(i, 1, i + 1);
    }
    validate_automaton(a);
    return a;
}

namespace {

using nlohmann::ordered_json;

ordered_json rational_json(const Rational& r) {
    return ordered_json{{"num", r.num().get_str()},
                        {"den", r.den().get_str()}};
}

ordered_json spec_json(const InstanceSpec& spec) {
    return ordered_json{{"seed", spec.seed},
                        {"mc_states", spec.mc_states},
                        {"aut_states", spec.aut_states},
                        {"alphabet_size", spec.alphabet_size},
                        {"density", rational_json(spec.density)},
                        {"family", family_name(spec.family)}};
}

ordered_json recurrence_json(const RecurrenceTable& table) {
    ordered_json rows = ordered_json::array();
    for (const RecurrenceRow& row : table.rows) {
        rows.push_back(ordered_json{
            {"mc_state", row.mc_state},
            {"aut_state", row.aut_state},
            {"prob_h", rational_json(row.prob_h)},
            {"recurrent", row.recurrent},
            {"h_unambiguous", row.h_unambiguous},
            {"method", row.method_used == FiniteMethod::lemma1
                           ? "lemma1"
                           : "subset_fallback"}});
    }
    return rows;
}

ordered_json report_json(const DiscrepancyReport& rep) {
    ordered_json recurrence = recurrence_json(rep.recurrence);
    ordered_json j{
        {"version", kToolVersion},
        {"spec", spec_json(rep.spec)},
        {"instance", ordered_json{{"mc", rep.mc_text},
                                  {"automaton", rep.aut_text},
                                  {"known_provenance", rep.known_provenance}}},
        {"known_value", rep.known_value ? rational_json(*rep.known_value)
                                        : ordered_json(nullptr)},
        {"procedure_value", rational_json(rep.procedure_value)},
        {"soundness_flag", kSoundnessFlag},
        {"recurrence", std::move(recurrence)},
        {"recurrent_set_empty", rep.recurrent_set_empty},
        {"diagnostic",
         ordered_json{{"estimate", rep.diagnostic_estimate},
                      {"half_width_3sigma", rep.diagnostic_half_width},
                      {"samples", kDiagnosticSamples},
                      {"k", kDiagnosticVisits},
                      {"horizon", kDiagnosticHorizon},
                      {"seed", rep.diagnostic_seed}}},
        {"positive_evidence", rep.positive_evidence},
        {"verdict", verdict_name(rep.verdict)},
        {"note", rep.note}};
    return j;
}

}  // namespace

std::string to_json_string(const DiscrepancyReport& report) {
    return report_json(report).dump(2) + "\n";
}

std::string to_json_string(const FuzzOutcome& outcome) {
    ordered_json reports = ordered_json::array();
    for (const DiscrepancyReport& r : outcome.reports)
        reports.push_back(report_json(r));
    ordered_json j{
        {"version", kToolVersion},
        {"tool", "fuzz"},
        {"seed", outcome.seed},
        {"family", family_name(outcome.family)},
        {"trials", outcome.reports.size()},
        {"counts",
         ordered_json{
             {"agree", outcome.count(TrialVerdict::agree)},
             {"disagree", outcome.count(TrialVerdict::disagree)},
             {"flagged", outcome.count(TrialVerdict::flagged)},
             {"not_comparable", outcome.count(TrialVerdict::not_comparable)}}},
        {"reports", std::move(reports)}};
    return j.dump(2) + "\n";
}

std::string to_json_string(const RecurrenceTable& table) {
    ordered_json j{{"version", kToolVersion},
                   {"soundness_flag", kSoundnessFlag},
                   {"recurrent_count", table.recurrent_count()},
                   {"recurrence", recurrence_json(table)}};
    return j.dump(2) + "\n";
}

std::string to_json_string(const HuntResult& result) {
    ordered_json j{
        {"version", kToolVersion},
        {"tool", "hunt"},
        {"found", result.found},
        {"trials_run", result.trials_run},
        {"counts", ordered_json{{"disagree", result.disagreements},
                                {"agree", result.agreements},
                                {"other", result.others}}},
        {"witness",
         result.found ? report_json(result.witness) : ordered_json(nullptr)}};
    return j.dump(2) + "\n";
}

}  // namespace ubamc
