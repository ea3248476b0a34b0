#include "ubamc/oracles.hpp"

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ubamc/automata_ops.hpp"
#include "ubamc/errors.hpp"
#include "ubamc/graph.hpp"
#include "ubamc/linsolve.hpp"
#include "ubamc/rng.hpp"
#include "ubamc/sampling.hpp"

namespace ubamc {

Rational prob_dba(const MarkovChain& m, const Automaton& d) {
    if (d.mode != AcceptanceMode::buchi)
        throw PreconditionError("prob_dba expects a Büchi automaton");
    Automaton d2 = align_to_chain(m, d);
    if (!is_deterministic(d2))
        throw PreconditionError(
            "prob_dba requires a deterministic automaton (at most one "
            "initial state, at most one target per letter)");
    d2 = complete_with_sink(d2);

    const int ns = m.size();
    const int nq = d2.num_states();
    const int p0 = d2.initial_states().at(0);
    auto vid = [nq](int s, int p) { return s * nq + p; };
    const int virt = ns * nq;

    // Product chain: deterministic automaton side, so rows stay stochastic.
    std::vector<std::vector<std::pair<int, Rational>>> rows(virt + 1);
    for (int s = 0; s < ns; ++s) {
        for (int p = 0; p < nq; ++p) {
            auto& row = rows[vid(s, p)];
            for (int s2 = 0; s2 < ns; ++s2) {
                const Rational& pr = m.trans[s][s2];
                if (pr.is_zero()) continue;
                row.emplace_back(vid(s2, d2.delta[p][s2][0]), pr);
            }
        }
    }
    for (int s = 0; s < ns; ++s) {
        if (m.init[s].is_zero()) continue;
        rows[virt].emplace_back(vid(s, d2.delta[p0][s][0]), m.init[s]);
    }

    std::vector<std::vector<int>> adj(rows.size());
    for (std::size_t v = 0; v < rows.size(); ++v)
        for (const auto& [t, pr] : rows[v]) adj[v].push_back(t);
    SccResult scc = scc_decompose(adj);

    // A bottom SCC has no edge leaving its component; it is accepting when
    // it contains a product vertex whose automaton state is accepting.
    std::vector<bool> bottom(scc.count, true);
    std::vector<bool> has_acc(scc.count, false);
    for (std::size_t v = 0; v < rows.size(); ++v) {
        for (int t : adj[v])
            if (scc.comp[t] != scc.comp[v]) bottom[scc.comp[v]] = false;
        if (v < static_cast<std::size_t>(virt) &&
            d2.accepting[static_cast<int>(v) % nq])
            has_acc[scc.comp[v]] = true;
    }

    std::vector<bool> target(rows.size(), false);
    for (std::size_t v = 0; v < rows.size(); ++v)
        target[v] = bottom[scc.comp[v]] && has_acc[scc.comp[v]];

    return reachability_probabilities(rows, target)[virt];
}

Rational prob_functional(const MarkovChain& m, const Automaton& a) {
    if (a.mode != AcceptanceMode::buchi)
        throw PreconditionError("prob_functional expects a Büchi automaton");
    const int ns = m.size();
    std::vector<int> succ(ns, -1);
    for (int s = 0; s < ns; ++s) {
        for (int t = 0; t < ns; ++t) {
            if (m.trans[s][t].is_zero()) continue;
            if (succ[s] >= 0 || !m.trans[s][t].is_one())
                throw PreconditionError("chain is not functional: state '" +
                                        m.states[s] +
                                        "' has more than one successor");
            succ[s] = t;
        }
    }

    Automaton a2 = align_to_chain(m, a);
    Rational total(0);
    for (int s = 0; s < ns; ++s) {
        if (m.init[s].is_zero()) continue;
        // Walk the unique trajectory until a state repeats; the suffix from
        // the repeat is the loop.
        std::vector<int> order;
        std::vector<int> pos(ns, -1);
        int cur = s;
        while (pos[cur] < 0) {
            pos[cur] = static_cast<int>(order.size());
            order.push_back(cur);
            cur = succ[cur];
        }
        Lasso l;
        for (int i = 0; i < pos[cur]; ++i) l.u.push_back(m.states[order[i]]);
        for (std::size_t i = pos[cur]; i < order.size(); ++i)
            l.v.push_back(m.states[order[i]]);
        if (lasso_membership(a2, l)) total += m.init[s];
    }
    return total;
}

VisitsReport visits_upper_estimate(const MarkovChain& m, const Automaton& a,
                                   int k, int horizon, std::uint64_t samples,
                                   std::uint64_t seed) {
    if (a.mode != AcceptanceMode::buchi)
        throw PreconditionError(
            "visits_upper_estimate expects a Büchi automaton");
    if (k < 1) throw PreconditionError("visit threshold k must be >= 1");
    if (horizon < k)
        throw PreconditionError("horizon must be at least the threshold k");
    if (samples == 0) throw PreconditionError("need at least one sample");

    Automaton a2 = align_to_chain(m, a);
    const int nq = a2.num_states();
    const int ns = m.size();

    // Per chain state (= letter) the flat edge list the DP sweeps over.
    std::vector<std::vector<std::pair<int, int>>> edges(ns);
    for (int q = 0; q < nq; ++q)
        for (int s = 0; s < ns; ++s)
            for (int t : a2.delta[q][s]) edges[s].emplace_back(q, t);

    ChainSampler sampler(m);
    std::vector<int> score(nq), next(nq);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        SplitMix64 rng(derive_seed(seed, i));
        // score[q] = best capped F-visit count over runs of the prefix so
        // far that end in q; -1 when no run ends there.
        score.assign(nq, -1);
        for (int q = 0; q < nq; ++q)
            if (a2.initial[q]) score[q] = a2.accepting[q] ? 1 : 0;
        int s = -1;
        for (int step = 0; step < horizon; ++step) {
            s = (s < 0) ? sampler.initial(rng) : sampler.step(s, rng);
            next.assign(nq, -1);
            for (const auto& [q, t] : edges[s]) {
                if (score[q] < 0) continue;
                int v = score[q] + (a2.accepting[t] ? 1 : 0);
                if (v > k) v = k;
                if (v > next[t]) next[t] = v;
            }
            score.swap(next);
        }
        for (int q = 0; q < nq; ++q)
            if (score[q] >= k) {
                ++hits;
                break;
            }
    }

    VisitsReport rep;
    rep.samples = samples;
    rep.hits = hits;
    rep.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    // three-sigma binomial half width
    double p = rep.estimate;
    double var = p * (1.0 - p) / static_cast<double>(samples);
    rep.half_width_3sigma = 3.0 * std::sqrt(var);
    return rep;
}

}  // namespace ubamc
