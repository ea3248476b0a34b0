#include "ubamc/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ubamc/automata_ops.hpp"
#include "ubamc/errors.hpp"
#include "ubamc/finite_prob.hpp"
#include "ubamc/harness.hpp"
#include "ubamc/model.hpp"
#include "ubamc/omega_prob.hpp"
#include "ubamc/oracles.hpp"
#include "ubamc/parse.hpp"
#include "ubamc/product.hpp"

namespace ubamc {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::string load_input(const std::string& path, std::ostream& err) {
    std::string text = read_file(path);
    err << "# input " << path << " fnv1a64=" << hex64(fnv1a64(text)) << "\n";
    return text;
}

MarkovChain load_mc(const std::string& path, std::ostream& err) {
    return parse_markov_chain(load_input(path, err));
}

Automaton load_aut(const std::string& path, std::ostream& err) {
    return parse_automaton(load_input(path, err));
}

void print_value(std::ostream& out, const Rational& v) {
    out << "prob = " << v.fraction_str() << " = " << v.decimal_str() << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write file '" + path + "'");
    f << text;
    f.flush();
    if (!f) throw Error("writing file '" + path + "' failed");
}

std::string word_str(const std::vector<std::string>& w) {
    if (w.empty()) return "(empty word)";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += w[i];
    }
    return s;
}

std::string lasso_str(const Lasso& l) {
    std::string u = l.u.empty() ? std::string("(empty)") : word_str(l.u);
    return "u = " + u + " | v = " + word_str(l.v);
}

void print_recurrence_table(std::ostream& out, const RecurrenceTable& t) {
    std::vector<std::array<std::string, 6>> rows;
    rows.push_back({"mc_state", "aut_state", "prob_h", "recurrent",
                    "h_unambiguous", "method"});
    for (const RecurrenceRow& r : t.rows)
        rows.push_back({r.mc_state, r.aut_state, r.prob_h.fraction_str(),
                        r.recurrent ? "yes" : "no",
                        r.h_unambiguous ? "yes" : "no",
                        r.method_used == FiniteMethod::lemma1
                            ? "lemma1"
                            : "subset_fallback"});
    std::array<std::size_t, 6> width{};
    for (const auto& row : rows)
        for (int c = 0; c < 6; ++c)
            if (row[c].size() > width[c]) width[c] = row[c].size();
    for (const auto& row : rows) {
        for (int c = 0; c < 6; ++c) {
            out << row[c];
            if (c < 5)
                out << std::string(width[c] - row[c].size() + 2, ' ');
        }
        out << "\n";
    }
    out << "recurrent pairs: " << t.recurrent_count() << " of "
        << t.rows.size() << "\n";
}

std::string fixed6(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{
        "ubamc: exact acceptance probabilities of Markov chain trajectories "
        "under unambiguous automata",
        "ubamc"};
    app.require_subcommand(1);

    std::string mc_path, aut_path, dot_path, json_path, report_path;
    std::string property, family = "dba_derived", union_method = "subset";
    std::uint64_t trials = 0, seed = 0, samples = 10000;
    int k = 4, horizon = 200;

    auto* p_nfa = app.add_subcommand(
        "prob-nfa", "probability a trajectory prefix is accepted (exact)");
    p_nfa->add_option("--mc", mc_path, "Markov chain file")->required();
    p_nfa->add_option("--aut", aut_path, "automaton file (nfa)")->required();
    p_nfa->add_option("--dot", dot_path, "dump the product graph as DOT");

    auto* p_uba = app.add_subcommand(
        "prob-uba",
        "recurrent-state procedure for Büchi acceptance (withdrawn, see "
        "warning)");
    p_uba->add_option("--mc", mc_path)->required();
    p_uba->add_option("--aut", aut_path, "automaton file (nba)")->required();
    p_uba->add_option("--union-method", union_method,
                      "how the union of G languages is evaluated")
        ->check(CLI::IsMember({"subset", "lemma1"}));

    auto* p_rec = app.add_subcommand(
        "recurrent", "the full recurrence table of a chain and an nba");
    p_rec->add_option("--mc", mc_path)->required();
    p_rec->add_option("--aut", aut_path)->required();
    p_rec->add_option("--json", json_path, "also write the table as JSON");

    auto* p_check =
        app.add_subcommand("check", "structural property of an automaton");
    p_check->add_option("--aut", aut_path)->required();
    p_check
        ->add_option("--property", property,
                     "unambiguous | separated | deterministic")
        ->required()
        ->check(CLI::IsMember({"unambiguous", "separated", "deterministic"}));

    auto* p_oracle =
        app.add_subcommand("oracle", "independent reference computations");
    p_oracle->require_subcommand(1);
    auto* o_dba = p_oracle->add_subcommand(
        "dba", "exact Büchi acceptance for deterministic automata");
    o_dba->add_option("--mc", mc_path)->required();
    o_dba->add_option("--aut", aut_path)->required();
    auto* o_fun = p_oracle->add_subcommand(
        "functional", "exact Büchi acceptance for point-mass chains");
    o_fun->add_option("--mc", mc_path)->required();
    o_fun->add_option("--aut", aut_path)->required();
    auto* o_vis = p_oracle->add_subcommand(
        "visits", "statistical over-approximation via capped F-visit counts");
    o_vis->add_option("--mc", mc_path)->required();
    o_vis->add_option("--aut", aut_path)->required();
    o_vis->add_option("--k", k, "required F-visits (default 4)");
    o_vis->add_option("--horizon", horizon, "prefix length (default 200)");
    o_vis->add_option("--samples", samples, "sample count (default 10000)");
    o_vis->add_option("--seed", seed, "master seed (default 0)");

    auto* p_fuzz = app.add_subcommand(
        "fuzz", "differential trials of the withdrawn procedure");
    p_fuzz->add_option("--trials", trials)->required();
    p_fuzz->add_option("--seed", seed)->required();
    p_fuzz->add_option("--family", family,
                       "instance family (default dba_derived)")
        ->check(CLI::IsMember({"raw_uba", "dba_derived", "functional"}));
    p_fuzz->add_option("--report", report_path,
                       "write the JSON report here instead of stdout");

    auto* p_hunt = app.add_subcommand(
        "hunt", "search for a soundness-failure witness instance");
    p_hunt->add_option("--trials", trials)->required();
    p_hunt->add_option("--seed", seed)->required();
    p_hunt->add_option("--report", report_path,
                       "write the JSON report here instead of stdout");

    std::vector<const char*> argv;
    argv.push_back("ubamc");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        err << "# ubamc version " << kToolVersion << "\n";
        if (p_nfa->parsed()) {
            MarkovChain m = load_mc(mc_path, err);
            Automaton a = load_aut(aut_path, err);
            FiniteProbResult r = prob_nfa_detail(m, a);
            print_value(out, r.value);
            out << "method: "
                << (r.method == FiniteMethod::lemma1 ? "equation-system"
                                                     : "subset-fallback")
                << "\n";
            if (!r.note.empty()) out << "note: " << r.note << "\n";
            if (!dot_path.empty()) {
                Automaton t = trim(align_to_chain(m, a));
                write_text_file(dot_path, to_dot(build_product(m, t)));
                err << "# wrote " << dot_path << "\n";
            }
        } else if (p_uba->parsed()) {
            // the marker is load-bearing for downstream tooling: exactly
            // one occurrence per run, before any result is printed
            err << "# WITHDRAWN-THEOREM-1: procedure per withdrawn Theorem "
                   "1; the value is the measure of the union of the "
                   "recurrent-pair languages and can undershoot the true "
                   "acceptance probability\n";
            MarkovChain m = load_mc(mc_path, err);
            Automaton a = load_aut(aut_path, err);
            UbaVerdict v = prob_uba_recurrent(m, a,
                                              union_method == "lemma1"
                                                  ? UnionMethod::lemma1
                                                  : UnionMethod::subset);
            print_value(out, v.value);
            out << "union method: "
                << (v.union_method == UnionMethod::subset ? "subset"
                                                          : "lemma1")
                << "\n";
            out << "soundness: " << v.soundness_flag << "\n";
        } else if (p_rec->parsed()) {
            MarkovChain m = load_mc(mc_path, err);
            Automaton a = load_aut(aut_path, err);
            RecurrenceTable t = recurrent_pairs(m, a);
            print_recurrence_table(out, t);
            if (!json_path.empty()) {
                write_text_file(json_path, to_json_string(t));
                err << "# wrote " << json_path << "\n";
            }
        } else if (p_check->parsed()) {
            Automaton a = load_aut(aut_path, err);
            if (property == "deterministic") {
                out << "verdict: "
                    << (is_deterministic(a) ? "deterministic"
                                            : "nondeterministic")
                    << "\n";
            } else if (property == "unambiguous") {
                AmbiguityVerdict v = check_unambiguous(a);
                out << "verdict: "
                    << (v.unambiguous ? "unambiguous" : "ambiguous") << "\n";
                if (v.witness_word)
                    out << "witness word: " << word_str(*v.witness_word)
                        << "\n";
                if (v.witness_lasso)
                    out << "witness lasso: " << lasso_str(*v.witness_lasso)
                        << "\n";
            } else {
                SeparationVerdict v = check_separated(a);
                out << "verdict: "
                    << (v.separated ? "separated" : "not separated") << "\n";
                if (!v.separated) {
                    out << "states: " << v.state_a << ", " << v.state_b
                        << "\n";
                    if (v.witness_word)
                        out << "witness word: " << word_str(*v.witness_word)
                            << "\n";
                    if (v.witness_lasso)
                        out << "witness lasso: " << lasso_str(*v.witness_lasso)
                            << "\n";
                }
            }
        } else if (o_dba->parsed()) {
            MarkovChain m = load_mc(mc_path, err);
            Automaton a = load_aut(aut_path, err);
            print_value(out, prob_dba(m, a));
        } else if (o_fun->parsed()) {
            MarkovChain m = load_mc(mc_path, err);
            Automaton a = load_aut(aut_path, err);
            print_value(out, prob_functional(m, a));
        } else if (o_vis->parsed()) {
            MarkovChain m = load_mc(mc_path, err);
            Automaton a = load_aut(aut_path, err);
            VisitsReport r =
                visits_upper_estimate(m, a, k, horizon, samples, seed);
            out << "estimate = " << fixed6(r.estimate) << "\n";
            out << "half_width_3sigma = " << fixed6(r.half_width_3sigma)
                << "\n";
            out << "hits = " << r.hits << " of " << r.samples << "\n";
        } else if (p_fuzz->parsed()) {
            FuzzOutcome fo = run_fuzz(trials, seed, family_from_name(family));
            out << "trials: " << fo.reports.size() << "\n";
            out << "agree: " << fo.count(TrialVerdict::agree)
                << "  disagree: " << fo.count(TrialVerdict::disagree)
                << "  flagged: " << fo.count(TrialVerdict::flagged)
                << "  not_comparable: "
                << fo.count(TrialVerdict::not_comparable) << "\n";
            if (!report_path.empty()) {
                write_text_file(report_path, to_json_string(fo));
                err << "# wrote " << report_path << "\n";
            } else {
                out << to_json_string(fo);
            }
        } else if (p_hunt->parsed()) {
            HuntResult hr = hunt_erratum_witness(trials, seed);
            out << (hr.found ? "witness found" : "no witness found")
                << " after " << hr.trials_run << " trials\n";
            out << "disagree: " << hr.disagreements
                << "  agree: " << hr.agreements << "  other: " << hr.others
                << "\n";
            if (!report_path.empty()) {
                write_text_file(report_path, to_json_string(hr));
                err << "# wrote " << report_path << "\n";
            } else {
                out << to_json_string(hr);
            }
        }
        return 0;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const SizeLimitError& e) {
        err << "error: " << e.what() << "\n";
        return 5;
    } catch (const InternalError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        // PreconditionError and plain Error (unreadable file and friends)
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace ubamc
