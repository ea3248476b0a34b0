#include "ubamc/finite_prob.hpp"

#include <cmath>
#include <deque>
#include <tuple>

#include "ubamc/automata_ops.hpp"
#include "ubamc/errors.hpp"
#include "ubamc/graph.hpp"
#include "ubamc/linsolve.hpp"
#include "ubamc/product.hpp"
#include "ubamc/sampling.hpp"

namespace ubamc {

namespace {

std::string join_word(const std::vector<std::string>& word) {
    if (word.empty()) return "(empty word)";
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += " ";
        out += word[i];
    }
    return out;
}

void require_finite(const Automaton& a, const char* who) {
    if (a.mode != AcceptanceMode::finite)
        throw PreconditionError(std::string(who) +
                                " expects a finite-mode automaton");
}

}  // namespace

bool has_entry_run_overlap(const MarkovChain& m, const Automaton& t) {
    require_finite(t, "has_entry_run_overlap");
    if (t.alphabet != m.states)
        throw PreconditionError(
            "automaton alphabet must equal the chain's state list (rename "
            "the automaton first)");
    const int n = t.num_states();
    const int num_s = m.size();
    if (n == 0) return false;

    // First-entry runs live in non-accepting states until their final
    // step. Configurations (s, q) with q not accepting; can_complete marks
    // those from which some positive-probability continuation finishes a
    // run by entering F.
    auto cfg = [&](int s, int q) { return s * n + q; };
    std::vector<std::vector<int>> adj(num_s * n);
    std::vector<int> completion_seeds;
    for (int s = 0; s < num_s; ++s)
        for (int q = 0; q < n; ++q) {
            if (t.accepting[q]) continue;
            bool completes = false;
            for (int s2 = 0; s2 < num_s; ++s2) {
                if (m.trans[s][s2].is_zero()) continue;
                for (int q2 : t.delta[q][s2]) {
                    if (t.accepting[q2])
                        completes = true;
                    else
                        adj[cfg(s, q)].push_back(cfg(s2, q2));
                }
            }
            if (completes) completion_seeds.push_back(cfg(s, q));
        }
    auto can_complete = reachable_from(reverse_graph(adj), completion_seeds);

    // Length-0 runs at accepting initial states overlap with anything
    // else that completes; two of them overlap outright.
    std::vector<int> nf_initials;
    int f_initials = 0;
    for (int q0 : t.initial_states()) {
        if (t.accepting[q0])
            ++f_initials;
        else
            nf_initials.push_back(q0);
    }
    if (f_initials >= 2) return true;
    auto first_letter_live = [&](int q0) {
        for (int s = 0; s < num_s; ++s) {
            if (m.init[s].is_zero()) continue;
            for (int x : t.delta[q0][s])
                if (t.accepting[x] || can_complete[cfg(s, x)]) return true;
        }
        return false;
    };
    if (f_initials == 1) {
        for (int q0 : nf_initials)
            if (first_letter_live(q0)) return true;
        return false;
    }

    // Walk unordered pairs of run prefixes along positive-probability
    // steps. A pair may sit on the diagonal: two runs agree until the
    // step where one enters F and the other continues, and that handoff
    // is exactly the overlap condition.
    std::vector<char> visited(static_cast<std::size_t>(num_s + 1) * n * n, 0);
    std::deque<std::tuple<int, int, int>> queue;
    auto push = [&](int s, int p, int q) {
        if (p > q) std::swap(p, q);
        std::size_t id =
            static_cast<std::size_t>(s + 1) * n * n + p * n + q;
        if (visited[id]) return;
        visited[id] = 1;
        queue.emplace_back(s, p, q);
    };
    for (int p0 : nf_initials)
        for (int q0 : nf_initials) push(-1, p0, q0);

    while (!queue.empty()) {
        auto [s, p, q] = queue.front();
        queue.pop_front();
        const auto& dist = s < 0 ? m.init : m.trans[s];
        for (int s2 = 0; s2 < num_s; ++s2) {
            if (dist[s2].is_zero()) continue;
            bool p_completes = false, q_completes = false;
            for (int x : t.delta[p][s2])
                if (t.accepting[x]) {
                    p_completes = true;
                    break;
                }
            for (int x : t.delta[q][s2])
                if (t.accepting[x]) {
                    q_completes = true;
                    break;
                }
            if (p_completes)
                for (int q2 : t.delta[q][s2])
                    if (!t.accepting[q2] && can_complete[cfg(s2, q2)])
                        return true;
            if (q_completes)
                for (int p2 : t.delta[p][s2])
                    if (!t.accepting[p2] && can_complete[cfg(s2, p2)])
                        return true;
            for (int p2 : t.delta[p][s2]) {
                if (t.accepting[p2]) continue;
                for (int q2 : t.delta[q][s2]) {
                    if (t.accepting[q2]) continue;
                    push(s2, p2, q2);
                }
            }
        }
    }
    return false;
}

FiniteProbResult prob_nfa_detail(const MarkovChain& m, const Automaton& a) {
    require_finite(a, "prob_nfa");
    Automaton a2 = align_to_chain(m, a);
    auto verdict = check_unambiguous(a2);
    if (!verdict.unambiguous)
        throw PreconditionError("automaton is ambiguous; witness word: " +
                                join_word(*verdict.witness_word));
    for (int q0 : a2.initial_states())
        if (a2.accepting[q0])
            return {Rational(1), FiniteMethod::lemma1, ""};  // empty word
    Automaton t = trim(a2);
    if (t.num_states() == 0) return {Rational(0), FiniteMethod::lemma1, ""};

    if (has_entry_run_overlap(m, t)) {
        FiniteProbResult r;
        r.value = prob_nfa_subset_oracle(m, a2);
        r.method = FiniteMethod::subset_fallback;
        r.note =
            "a trajectory can carry two distinct accepting first entries; "
            "the equation system counts both, so the subset route answers";
        return r;
    }

    ProductGraph pg = build_product(m, t);
    ProductSystem ps = build_product_system(pg);
    auto xi = solve_unique(ps.sys);
    Rational total(0);
    for (int v : pg.virtual_ids()) {
        switch (pg.tag[v]) {
            case VertexTag::unknown:
                total += xi[ps.index_of[v]];
                break;
            case VertexTag::dead:
                break;
            case VertexTag::accepting:
                throw InternalError("epsilon acceptance escaped its early return");
        }
    }
    if (!total.in_unit_interval())
        throw InternalError("system total outside [0,1] on an overlap-free instance");
    return {total, FiniteMethod::lemma1, ""};
}

Rational prob_nfa(const MarkovChain& m, const Automaton& a) {
    return prob_nfa_detail(m, a).value;
}

Rational prob_nfa_subset_oracle(const MarkovChain& m, const Automaton& a) {
    require_finite(a, "prob_nfa_subset_oracle");
    Automaton a2 = align_to_chain(m, a);
    const std::uint64_t acc = accepting_mask(a2);
    auto chain = build_subset_chain(
        m, a2, [acc](int, std::uint64_t u) { return (u & acc) != 0; });
    return reachability_probabilities(chain)[0];
}

SimulationReport simulate_prefix_acceptance(const MarkovChain& m,
                                            const Automaton& a,
                                            std::uint64_t samples,
                                            std::uint64_t seed) {
    require_finite(a, "simulate_prefix_acceptance");
    Automaton a2 = align_to_chain(m, a);
    const std::uint64_t acc = accepting_mask(a2);

    SimulationReport rep;
    rep.samples = samples;

    bool have_chain = true;
    SubsetChain chain;
    try {
        chain = build_subset_chain(
            m, a2, [acc](int, std::uint64_t u) { return (u & acc) != 0; });
    } catch (const SizeLimitError&) {
        // too many subsets to precompute rejection states; fall back to a
        // raw walk that only rejects on the empty subset
        have_chain = false;
    }

    if (have_chain) {
        std::vector<std::vector<int>> adj(chain.size());
        std::vector<int> targets;
        for (int v = 0; v < chain.size(); ++v) {
            for (const auto& [t, p] : chain.trans[v]) adj[v].push_back(t);
            if (chain.target[v]) targets.push_back(v);
        }
        auto alive = reachable_from(reverse_graph(adj), targets);
        std::vector<RowSampler> samplers;
        samplers.reserve(chain.size());
        for (int v = 0; v < chain.size(); ++v) {
            std::vector<Rational> row;
            row.reserve(chain.trans[v].size());
            for (const auto& [t, p] : chain.trans[v]) row.push_back(p);
            samplers.emplace_back(row);
        }
        for (std::uint64_t i = 0; i < samples; ++i) {
            SplitMix64 rng(derive_seed(seed, i));
            int v = 0;
            std::uint64_t steps = 0;
            for (;;) {
                if (chain.target[v]) {
                    ++rep.accepted;
                    break;
                }
                if (!alive[v]) {
                    ++rep.rejected;
                    break;
                }
                if (steps++ >= kSimulationStepCap) {
                    ++rep.undecided;
                    break;
                }
                v = chain.trans[v][samplers[v].sample(rng)].first;
            }
        }
    } else {
        ChainSampler sampler(m);
        auto steps_tbl = mask_steps(a2);
        const std::uint64_t u0 = initial_mask(a2);
        for (std::uint64_t i = 0; i < samples; ++i) {
            SplitMix64 rng(derive_seed(seed, i));
            std::uint64_t u = u0;
            int s = -1;
            std::uint64_t steps = 0;
            for (;;) {
                if ((u & acc) != 0) {
                    ++rep.accepted;
                    break;
                }
                if (u == 0) {
                    ++rep.rejected;
                    break;
                }
                if (steps++ >= kSimulationStepCap) {
                    ++rep.undecided;
                    break;
                }
                s = s < 0 ? sampler.initial(rng) : sampler.step(s, rng);
                u = mask_step(steps_tbl, u, s);
            }
        }
    }

    if (samples > 0) {
        rep.estimate =
            static_cast<double>(rep.accepted) / static_cast<double>(samples);
        rep.half_width_3sigma =
            3.0 * std::sqrt(rep.estimate * (1.0 - rep.estimate) /
                            static_cast<double>(samples));
    }
    return rep;
}

}  // namespace ubamc
