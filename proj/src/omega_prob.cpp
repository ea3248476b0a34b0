#include "ubamc/omega_prob.hpp"

#include "ubamc/automata_ops.hpp"
#include "ubamc/errors.hpp"
#include "ubamc/linsolve.hpp"
#include "ubamc/product.hpp"

namespace ubamc {

int RecurrenceTable::recurrent_count() const {
    int n = 0;
    for (const auto& row : rows)
        if (row.recurrent) ++n;
    return n;
}

namespace {

Automaton checked_alignment(const MarkovChain& m, const Automaton& a,
                            const char* who) {
    if (a.mode != AcceptanceMode::buchi)
        throw PreconditionError(std::string(who) +
                                " expects a buchi automaton");
    Automaton a2 = align_to_chain(m, a);
    auto verdict = check_unambiguous(a2);
    if (!verdict.unambiguous) {
        const auto& lasso = *verdict.witness_lasso;
        std::string u, v;
        for (const auto& x : lasso.u) u += (u.empty() ? "" : " ") + x;
        for (const auto& x : lasso.v) v += (v.empty() ? "" : " ") + x;
        throw PreconditionError("automaton is ambiguous; witness lasso: (" +
                                u + ") (" + v + ")^w");
    }
    return a2;
}

MarkovChain restart_at(const MarkovChain& m, int s) {
    MarkovChain out = m;
    out.init = m.trans[s];
    out.labels.reset();  // irrelevant once the automaton is aligned
    return out;
}

}  // namespace

RecurrenceTable recurrent_pairs(const MarkovChain& m, const Automaton& a) {
    Automaton a2 = checked_alignment(m, a, "recurrent_pairs");
    RecurrenceTable table;
    for (int s = 0; s < m.size(); ++s) {
        MarkovChain ms = restart_at(m, s);
        for (int q : a2.accepting_states()) {
            RecurrenceRow row;
            row.mc_state = m.states[s];
            row.aut_state = a2.states[q];
            Automaton h = build_h_nfa(a2, m.states[s], a2.states[q]);
            row.h_unambiguous = check_unambiguous(h).unambiguous;
            if (row.h_unambiguous) {
                auto detail = prob_nfa_detail(ms, h);
                row.prob_h = detail.value;
                row.method_used = detail.method;
            } else {
                row.prob_h = prob_nfa_subset_oracle(ms, h);
                row.method_used = FiniteMethod::subset_fallback;
            }
            row.recurrent = row.prob_h.is_one();
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

UbaVerdict prob_uba_recurrent(const MarkovChain& m, const Automaton& a,
                              UnionMethod requested) {
    Automaton a2 = checked_alignment(m, a, "prob_uba_recurrent");
    if (a2.num_states() > 64)
        throw SizeLimitError("subset-based union evaluation is capped at 64 "
                             "automaton states");
    UbaVerdict verdict;
    verdict.recurrence = recurrent_pairs(m, a2);

    // recurrent pairs as (letter index, state index); with the aligned
    // alphabet the letter index of s is the chain state index itself
    std::vector<std::pair<int, int>> recurrent;
    std::vector<std::uint64_t> rec_mask(m.size(), 0);
    {
        std::size_t i = 0;
        auto acc = a2.accepting_states();
        for (int s = 0; s < m.size(); ++s)
            for (int q : acc) {
                if (verdict.recurrence.rows[i].recurrent) {
                    recurrent.emplace_back(s, q);
                    rec_mask[s] |= std::uint64_t(1) << q;
                }
                ++i;
            }
    }

    auto chain = build_subset_chain(
        m, a2, [&rec_mask](int s, std::uint64_t u) {
            return s >= 0 && (u & rec_mask[s]) != 0;
        });
    Rational subset_value = reachability_probabilities(chain)[0];

    verdict.value = subset_value;
    verdict.union_method = UnionMethod::subset;
    if (requested == UnionMethod::lemma1) {
        Automaton union_g = build_union_g_nfa(a2, recurrent);
        if (check_unambiguous(union_g).unambiguous) {
            Rational lemma_value = prob_nfa(m, union_g);
            if (lemma_value != subset_value)
                throw InternalError(
                    "union-G evaluation routes disagree: " +
                    lemma_value.fraction_str() + " vs " +
                    subset_value.fraction_str());
            verdict.union_method = UnionMethod::lemma1;
        }
    }
    return verdict;
}

}  // namespace ubamc
