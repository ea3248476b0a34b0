#include <doctest.h>

#include <string>
#include <vector>

#include "ubamc/automata_ops.hpp"
#include "ubamc/errors.hpp"
#include "ubamc/harness.hpp"
#include "ubamc/model.hpp"
#include "ubamc/oracles.hpp"
#include "ubamc/parse.hpp"
#include "ubamc/rng.hpp"

#include "support/brute.hpp"

using namespace ubamc;

namespace {

std::string fixture(const std::string& name) {
    return read_file(std::string(UBAMC_FIXTURE_DIR) + "/" + name);
}

// the erratum instance, assembled by hand instead of drawn
Instance erratum_instance() {
    Instance inst;
    inst.spec.family = Family::dba_derived;
    inst.mc = parse_markov_chain(fixture("fair_coin.mc"));
    inst.aut = parse_automaton(fixture("predict_next.nba"));
    inst.known_value = Rational(1);
    inst.known_provenance = "dba_oracle";
    inst.oracle_input = parse_automaton(fixture("universal_dba.nba"));
    return inst;
}

}  // namespace

TEST_CASE("instance generation is a function of the spec") {
    InstanceSpec spec;
    spec.seed = 42;
    Instance a = gen_instance(spec);
    Instance b = gen_instance(spec);
    CHECK(serialize_markov_chain(a.mc) == serialize_markov_chain(b.mc));
    CHECK(serialize_automaton(a.aut) == serialize_automaton(b.aut));
    REQUIRE(a.known_value.has_value());
    CHECK(*a.known_value == *b.known_value);
    // a different seed gives different material
    spec.seed = 43;
    Instance c = gen_instance(spec);
    CHECK(serialize_automaton(a.aut) != serialize_automaton(c.aut));
}

TEST_CASE("dba_derived instances carry a replayable exact reference") {
    for (std::uint64_t seed : {1u, 5u, 9u}) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.family = Family::dba_derived;
        Instance inst = gen_instance(spec);
        CHECK(inst.known_provenance == "dba_oracle");
        REQUIRE(inst.known_value.has_value());
        REQUIRE(inst.oracle_input.has_value());
        CHECK(is_deterministic(*inst.oracle_input));
        // the tested automaton is the unfolding: unambiguous but not
        // deterministic, and the reference recomputes from the original
        CHECK(check_unambiguous(inst.aut).unambiguous);
        CHECK_FALSE(is_deterministic(inst.aut));
        CHECK(*inst.known_value == prob_dba(inst.mc, *inst.oracle_input));
    }
}

TEST_CASE("functional instances recompute against the functional oracle") {
    InstanceSpec spec;
    spec.seed = 11;
    spec.family = Family::functional;
    Instance inst = gen_instance(spec);
    CHECK(inst.known_provenance == "functional_oracle");
    for (const auto& row : inst.mc.trans) {
        int nonzero = 0;
        for (const Rational& p : row)
            if (p.sign() > 0) ++nonzero;
        CHECK(nonzero == 1);
    }
    REQUIRE(inst.known_value.has_value());
    CHECK(*inst.known_value == prob_functional(inst.mc, inst.aut));
}

TEST_CASE("raw instances carry no reference and are not comparable") {
    InstanceSpec spec;
    spec.seed = 11;
    spec.family = Family::raw_uba;
    Instance inst = gen_instance(spec);
    CHECK_FALSE(inst.known_value.has_value());
    CHECK(inst.known_provenance.empty());
    DiscrepancyReport rep = differential_trial(inst, 9);
    CHECK(rep.verdict == TrialVerdict::not_comparable);
}

TEST_CASE("spec bounds are enforced") {
    InstanceSpec spec;
    spec.mc_states = 7;
    CHECK_THROWS_AS(gen_instance(spec), PreconditionError);
    spec = InstanceSpec{};
    spec.alphabet_size = 4;
    CHECK_THROWS_AS(gen_instance(spec), PreconditionError);
    spec = InstanceSpec{};
    spec.density = Rational(0);
    CHECK_THROWS_AS(gen_instance(spec), PreconditionError);
}

TEST_CASE("verdict names are stable") {
    CHECK(verdict_name(TrialVerdict::agree) == "agree");
    CHECK(verdict_name(TrialVerdict::disagree) == "disagree");
    CHECK(verdict_name(TrialVerdict::flagged) == "flagged");
    CHECK(verdict_name(TrialVerdict::not_comparable) == "not_comparable");
}

TEST_CASE("a well-behaved derived instance agrees") {
    InstanceSpec spec;
    spec.seed = 5;
    Instance inst = gen_instance(spec);
    DiscrepancyReport rep = differential_trial(inst, 17);
    CHECK(rep.verdict == TrialVerdict::agree);
    CHECK(rep.procedure_value == *rep.known_value);
}

TEST_CASE("the predict-next instance is caught as a disagreement") {
    DiscrepancyReport rep = differential_trial(erratum_instance(), 123);
    CHECK(rep.verdict == TrialVerdict::disagree);
    CHECK(rep.known_value == Rational(1));
    CHECK(rep.procedure_value == Rational(0));
    CHECK(rep.recurrent_set_empty);
    // the statistical diagnostic sees every sampled prefix hit F
    CHECK(rep.positive_evidence);
    CHECK(rep.diagnostic_estimate == 1.0);
}

TEST_CASE("without the reference the same instance is still flagged") {
    Instance inst = erratum_instance();
    inst.known_value.reset();
    inst.known_provenance.clear();
    inst.oracle_input.reset();
    DiscrepancyReport rep = differential_trial(inst, 123);
    CHECK(rep.verdict == TrialVerdict::flagged);
    CHECK(rep.positive_evidence);
}

TEST_CASE("k-th from the end accepts exactly the right words") {
    for (int k = 2; k <= 3; ++k) {
        Automaton a = kth_from_end_nfa(k);
        for (const auto& w : brute::all_words(2, 6)) {
            bool want = static_cast<int>(w.size()) >= k &&
                        w[w.size() - static_cast<std::size_t>(k)] == 0;
            CHECK(brute::accepts_finite(a, w) == want);
        }
    }
    CHECK_THROWS_AS(kth_from_end_nfa(0), PreconditionError);
}

TEST_CASE("the hunt rejects a zero-trial budget") {
    CHECK_THROWS_AS(hunt_erratum_witness(0, 1), PreconditionError);
}

TEST_CASE("the hunt finds a witness within its budget") {
    HuntResult hr = hunt_erratum_witness(45, 3);
    REQUIRE(hr.found);
    CHECK(hr.trials_run == 40);
    CHECK(hr.disagreements == 1);
    CHECK(hr.agreements == 39);
    CHECK(hr.others == 0);
    // the witness shows the signature failure: empty recurrent set with
    // a positive exact reference
    CHECK(hr.witness.verdict == TrialVerdict::disagree);
    CHECK(hr.witness.recurrent_set_empty);
    REQUIRE(hr.witness.known_value.has_value());
    CHECK(hr.witness.known_value->sign() > 0);
    CHECK(hr.witness.procedure_value == Rational(0));
    std::string json = to_json_string(hr);
    CHECK(json.find(kSoundnessFlag) != std::string::npos);
}

TEST_CASE("fuzz outcomes are reproducible") {
    FuzzOutcome a = run_fuzz(5, 7, Family::dba_derived);
    FuzzOutcome b = run_fuzz(5, 7, Family::dba_derived);
    CHECK(to_json_string(a) == to_json_string(b));
    CHECK(a.reports.size() == 5);
    int total = a.count(TrialVerdict::agree) + a.count(TrialVerdict::disagree) +
                a.count(TrialVerdict::flagged) +
                a.count(TrialVerdict::not_comparable);
    CHECK(total == 5);
}

TEST_CASE("any report replays byte-identically from its spec") {
    FuzzOutcome fo = run_fuzz(4, 21, Family::dba_derived);
    for (const DiscrepancyReport& rep : fo.reports) {
        Instance inst = gen_instance(rep.spec);
        CHECK(serialize_markov_chain(inst.mc) == rep.mc_text);
        CHECK(serialize_automaton(inst.aut) == rep.aut_text);
        DiscrepancyReport again = differential_trial(inst, rep.diagnostic_seed);
        CHECK(to_json_string(again) == to_json_string(rep));
    }
}

TEST_CASE("family names round-trip") {
    for (Family f :
         {Family::raw_uba, Family::dba_derived, Family::functional})
        CHECK(family_from_name(family_name(f)) == f);
    CHECK_THROWS_AS(family_from_name("junk"), Error);
}

TEST_CASE("generator building blocks are valid by construction") {
    SplitMix64 rng(3131);
    for (int trial = 0; trial < 20; ++trial) {
        MarkovChain m = random_chain(rng, 4, 2, Rational(1, 2), false);
        CHECK_NOTHROW(validate_markov_chain(m));
        MarkovChain f = random_chain(rng, 4, 2, Rational(1, 2), true);
        for (const auto& row : f.trans) {
            int nonzero = 0;
            for (const Rational& p : row)
                if (p.sign() > 0) ++nonzero;
            CHECK(nonzero == 1);
        }
        Automaton d = random_deterministic_complete(rng, 4, 2);
        CHECK(is_deterministic(d));
        CHECK(is_complete(d));
    }
}
