#include "ubamc/automata_ops.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "ubamc/errors.hpp"
#include "ubamc/graph.hpp"

namespace ubamc {

namespace {

// Adjacency over all letters, edge labels dropped.
std::vector<std::vector<int>> union_graph(const Automaton& a) {
    std::vector<std::vector<int>> adj(a.num_states());
    for (int q = 0; q < a.num_states(); ++q)
        for (int l = 0; l < a.num_letters(); ++l)
            for (int t : a.delta[q][l]) adj[q].push_back(t);
    return adj;
}

// States that lie on some accepting run suffix in buchi mode: can reach a
// nontrivial SCC containing an accepting state.
std::vector<bool> buchi_live_states(const Automaton& a) {
    auto adj = union_graph(a);
    auto scc = scc_decompose(adj);
    std::vector<int> seeds;
    for (int q = 0; q < a.num_states(); ++q)
        if (a.accepting[q] && scc.nontrivial[scc.comp[q]]) {
            // every member of that SCC can reach the cycle; seed the SCC
            seeds.push_back(q);
        }
    return reachable_from(reverse_graph(adj), seeds);
}

// ---- pair graph for ambiguity / separateness ----------------------------

struct LabeledGraph {
    int n = 0;  // vertices
    std::vector<std::vector<std::pair<int, int>>> adj;  // (target, letter)
};

int pair_id(int p, int q, int n) { return p * n + q; }

LabeledGraph build_pair_graph(const Automaton& a) {
    const int n = a.num_states();
    if (n > 2000)
        throw SizeLimitError("self-product too large (" + std::to_string(n) +
                             " states)");
    LabeledGraph g;
    g.n = n * n;
    g.adj.resize(g.n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            auto& out = g.adj[pair_id(p, q, n)];
            for (int l = 0; l < a.num_letters(); ++l)
                for (int pt : a.delta[p][l])
                    for (int qt : a.delta[q][l])
                        out.emplace_back(pair_id(pt, qt, n), l);
        }
    return g;
}

std::vector<std::vector<int>> strip_labels(const LabeledGraph& g) {
    std::vector<std::vector<int>> adj(g.n);
    for (int v = 0; v < g.n; ++v)
        for (auto [t, l] : g.adj[v]) adj[v].push_back(t);
    return adj;
}

struct Bfs {
    std::vector<int> parent;      // predecessor vertex, -1 at seeds
    std::vector<int> via_letter;  // letter on the edge into the vertex
    std::vector<bool> seen;
};

// restrict_comp >= 0 confines the search to one SCC (comp array given).
Bfs bfs_labeled(const LabeledGraph& g, const std::vector<int>& seeds,
                const std::vector<int>* comp = nullptr,
                int restrict_comp = -1) {
    Bfs b;
    b.parent.assign(g.n, -2);  // -2 = unvisited
    b.via_letter.assign(g.n, -1);
    b.seen.assign(g.n, false);
    std::deque<int> queue;
    for (int s : seeds) {
        if (b.seen[s]) continue;
        b.seen[s] = true;
        b.parent[s] = -1;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (auto [t, l] : g.adj[v]) {
            if (restrict_comp >= 0 && (*comp)[t] != restrict_comp) continue;
            if (b.seen[t]) continue;
            b.seen[t] = true;
            b.parent[t] = v;
            b.via_letter[t] = l;
            queue.push_back(t);
        }
    }
    return b;
}

std::vector<int> path_letters(const Bfs& b, int to) {
    std::vector<int> letters;
    for (int v = to; b.parent[v] != -1; v = b.parent[v])
        letters.push_back(b.via_letter[v]);
    std::reverse(letters.begin(), letters.end());
    return letters;
}

std::vector<std::string> letters_to_names(const Automaton& a,
                                          const std::vector<int>& letters) {
    std::vector<std::string> out;
    out.reserve(letters.size());
    for (int l : letters) out.push_back(a.alphabet[l]);
    return out;
}

// Per-pair-vertex flags: first coordinate accepting / second accepting.
void pair_accepting_flags(const Automaton& a, std::vector<bool>& first_f,
                          std::vector<bool>& second_f) {
    const int n = a.num_states();
    first_f.assign(n * n, false);
    second_f.assign(n * n, false);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            if (a.accepting[p]) first_f[pair_id(p, q, n)] = true;
            if (a.accepting[q]) second_f[pair_id(p, q, n)] = true;
        }
}

// SCCs of the pair graph that witness buchi double acceptance: nontrivial
// and containing both a (F×Q)- and a (Q×F)-vertex.
std::vector<bool> good_pair_sccs(const LabeledGraph& g, const SccResult& scc,
                                 const std::vector<bool>& first_f,
                                 const std::vector<bool>& second_f) {
    std::vector<bool> has1(scc.count, false), has2(scc.count, false);
    for (int v = 0; v < g.n; ++v) {
        if (first_f[v]) has1[scc.comp[v]] = true;
        if (second_f[v]) has2[scc.comp[v]] = true;
    }
    std::vector<bool> good(scc.count, false);
    for (int c = 0; c < scc.count; ++c)
        good[c] = scc.nontrivial[c] && has1[c] && has2[c];
    return good;
}

// Nonempty cycle at y inside its SCC passing through a first_f vertex and a
// second_f vertex (the SCC is good, so both exist in it).
std::vector<int> good_cycle_letters(const LabeledGraph& g,
                                    const SccResult& scc, int y,
                                    const std::vector<bool>& first_f,
                                    const std::vector<bool>& second_f) {
    const int c = scc.comp[y];
    auto leg = [&](int from, auto&& pred) -> std::pair<int, std::vector<int>> {
        Bfs b = bfs_labeled(g, {from}, &scc.comp, c);
        for (int v = 0; v < g.n; ++v)
            if (b.seen[v] && pred(v)) return {v, path_letters(b, v)};
        throw InternalError("good SCC lost a required vertex");
    };
    auto [a1, w1] = leg(y, [&](int v) { return first_f[v]; });
    auto [a2, w2] = leg(a1, [&](int v) { return second_f[v]; });
    auto [back, w3] = leg(a2, [&](int v) { return v == y; });
    (void)back;
    std::vector<int> cycle = w1;
    cycle.insert(cycle.end(), w2.begin(), w2.end());
    cycle.insert(cycle.end(), w3.begin(), w3.end());
    if (!cycle.empty()) return cycle;
    // y is itself doubly accepting and the legs were empty; force one lap.
    for (auto [t, l] : g.adj[y]) {
        if (scc.comp[t] != c) continue;
        Bfs b = bfs_labeled(g, {t}, &scc.comp, c);
        if (!b.seen[y]) continue;
        cycle.push_back(l);
        auto rest = path_letters(b, y);
        cycle.insert(cycle.end(), rest.begin(), rest.end());
        return cycle;
    }
    throw InternalError("nontrivial SCC without an internal cycle");
}

}  // namespace

Automaton existential_rename(const Automaton& a,
                             const std::vector<std::string>& new_alphabet,
                             const std::vector<std::string>& lam) {
    if (new_alphabet.size() != lam.size())
        throw PreconditionError("renaming map is partial: " +
                                std::to_string(lam.size()) + " images for " +
                                std::to_string(new_alphabet.size()) +
                                " letters");
    if (new_alphabet.empty())
        throw PreconditionError("renaming onto an empty alphabet");
    {
        std::unordered_set<std::string> seen;
        for (const auto& x : new_alphabet)
            if (!seen.insert(x).second)
                throw PreconditionError("duplicate letter '" + x +
                                        "' in renamed alphabet");
    }
    std::vector<int> image;
    image.reserve(lam.size());
    for (const auto& target : lam) {
        int l = a.letter_index(target);
        if (l < 0)
            throw PreconditionError("renaming image '" + target +
                                    "' is not a letter of the automaton");
        image.push_back(l);
    }
    Automaton out;
    out.mode = a.mode;
    out.alphabet = new_alphabet;
    out.states = a.states;
    out.initial = a.initial;
    out.accepting = a.accepting;
    out.delta.assign(a.num_states(), {});
    for (int q = 0; q < a.num_states(); ++q) {
        out.delta[q].resize(new_alphabet.size());
        for (std::size_t x = 0; x < new_alphabet.size(); ++x)
            out.delta[q][x] = a.delta[q][image[x]];
    }
    return out;
}

Automaton align_to_chain(const MarkovChain& m, const Automaton& a) {
    if (a.alphabet == m.states) return a;
    if (m.labels) return existential_rename(a, m.states, *m.labels);
    throw PreconditionError(
        "automaton alphabet must equal the chain's state list (rename the "
        "automaton first)");
}

Automaton trim(const Automaton& a) {
    const int n = a.num_states();
    auto adj = union_graph(a);
    std::vector<bool> reach = reachable_from(adj, a.initial_states());
    std::vector<bool> live;
    if (a.mode == AcceptanceMode::finite) {
        live = reachable_from(reverse_graph(adj), a.accepting_states());
    } else {
        live = buchi_live_states(a);
    }

    std::vector<int> keep_index(n, -1);
    Automaton out;
    out.mode = a.mode;
    out.alphabet = a.alphabet;
    for (int q = 0; q < n; ++q) {
        if (!(reach[q] && live[q])) continue;
        keep_index[q] = static_cast<int>(out.states.size());
        out.states.push_back(a.states[q]);
        out.initial.push_back(a.initial[q]);
        out.accepting.push_back(a.accepting[q]);
    }
    out.delta.assign(out.states.size(),
                     std::vector<std::vector<int>>(a.num_letters()));
    for (int q = 0; q < n; ++q) {
        if (keep_index[q] < 0) continue;
        for (int l = 0; l < a.num_letters(); ++l)
            for (int t : a.delta[q][l])
                if (keep_index[t] >= 0)
                    out.delta[keep_index[q]][l].push_back(keep_index[t]);
    }
    return out;
}

AmbiguityVerdict check_unambiguous(const Automaton& a) {
    Automaton t = trim(a);
    AmbiguityVerdict verdict;
    const int n = t.num_states();
    if (n == 0) return verdict;

    LabeledGraph g = build_pair_graph(t);
    std::vector<int> initial_pairs;
    for (int p : t.initial_states())
        for (int q : t.initial_states())
            initial_pairs.push_back(pair_id(p, q, n));
    Bfs forward = bfs_labeled(g, initial_pairs);

    auto off_diagonal = [&](int v) { return v / n != v % n; };

    if (t.mode == AcceptanceMode::finite) {
        std::vector<int> acc_pairs;
        for (int p : t.accepting_states())
            for (int q : t.accepting_states())
                acc_pairs.push_back(pair_id(p, q, n));
        auto co_acc = reachable_from(reverse_graph(strip_labels(g)), acc_pairs);
        for (int v = 0; v < g.n; ++v) {
            if (!forward.seen[v] || !co_acc[v] || !off_diagonal(v)) continue;
            verdict.unambiguous = false;
            auto word = path_letters(forward, v);
            Bfs tail = bfs_labeled(g, {v});
            for (int w = 0; w < g.n; ++w) {
                if (!tail.seen[w]) continue;
                if (!(t.accepting[w / n] && t.accepting[w % n])) continue;
                auto rest = path_letters(tail, w);
                word.insert(word.end(), rest.begin(), rest.end());
                verdict.witness_word = letters_to_names(t, word);
                return verdict;
            }
            throw InternalError("co-accessible pair lost its accepting path");
        }
        return verdict;
    }

    // buchi: off-diagonal pair reachable from the initial pairs from which a
    // good SCC (cycle hitting F in both coordinates) is reachable.
    std::vector<bool> first_f, second_f;
    pair_accepting_flags(t, first_f, second_f);
    auto plain = strip_labels(g);
    SccResult scc = scc_decompose(plain);
    auto good = good_pair_sccs(g, scc, first_f, second_f);
    std::vector<int> good_members;
    for (int v = 0; v < g.n; ++v)
        if (good[scc.comp[v]]) good_members.push_back(v);
    auto reaches_good = reachable_from(reverse_graph(plain), good_members);

    for (int v = 0; v < g.n; ++v) {
        if (!forward.seen[v] || !reaches_good[v] || !off_diagonal(v)) continue;
        verdict.unambiguous = false;
        auto u = path_letters(forward, v);
        Bfs onward = bfs_labeled(g, {v});
        for (int y = 0; y < g.n; ++y) {
            if (!onward.seen[y] || !good[scc.comp[y]]) continue;
            auto mid = path_letters(onward, y);
            u.insert(u.end(), mid.begin(), mid.end());
            Lasso lasso;
            lasso.u = letters_to_names(t, u);
            lasso.v = letters_to_names(
                t, good_cycle_letters(g, scc, y, first_f, second_f));
            verdict.witness_lasso = std::move(lasso);
            return verdict;
        }
        throw InternalError("pair lost its path to a good SCC");
    }
    return verdict;
}

SeparationVerdict check_separated(const Automaton& a) {
    SeparationVerdict verdict;
    const int n = a.num_states();
    if (n <= 1) return verdict;
    LabeledGraph g = build_pair_graph(a);

    if (a.mode == AcceptanceMode::finite) {
        std::vector<int> acc_pairs;
        for (int p : a.accepting_states())
            for (int q : a.accepting_states())
                acc_pairs.push_back(pair_id(p, q, n));
        auto co_acc = reachable_from(reverse_graph(strip_labels(g)), acc_pairs);
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                int v = pair_id(p, q, n);
                if (!co_acc[v]) continue;
                verdict.separated = false;
                verdict.state_a = a.states[p];
                verdict.state_b = a.states[q];
                Bfs tail = bfs_labeled(g, {v});
                for (int w = 0; w < g.n; ++w) {
                    if (!tail.seen[w]) continue;
                    if (!(a.accepting[w / n] && a.accepting[w % n])) continue;
                    verdict.witness_word =
                        letters_to_names(a, path_letters(tail, w));
                    return verdict;
                }
                throw InternalError("co-accessible pair lost its word");
            }
        return verdict;
    }

    std::vector<bool> first_f, second_f;
    pair_accepting_flags(a, first_f, second_f);
    auto plain = strip_labels(g);
    SccResult scc = scc_decompose(plain);
    auto good = good_pair_sccs(g, scc, first_f, second_f);
    std::vector<int> good_members;
    for (int v = 0; v < g.n; ++v)
        if (good[scc.comp[v]]) good_members.push_back(v);
    auto reaches_good = reachable_from(reverse_graph(plain), good_members);

    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            int v = pair_id(p, q, n);
            if (!reaches_good[v]) continue;
            verdict.separated = false;
            verdict.state_a = a.states[p];
            verdict.state_b = a.states[q];
            Bfs onward = bfs_labeled(g, {v});
            for (int y = 0; y < g.n; ++y) {
                if (!onward.seen[y] || !good[scc.comp[y]]) continue;
                Lasso lasso;
                lasso.u = letters_to_names(a, path_letters(onward, y));
                lasso.v = letters_to_names(
                    a, good_cycle_letters(g, scc, y, first_f, second_f));
                verdict.witness_lasso = std::move(lasso);
                return verdict;
            }
            throw InternalError("pair lost its path to a good SCC");
        }
    return verdict;
}

Automaton subset_determinize(const Automaton& a) {
    if (a.mode != AcceptanceMode::finite)
        throw PreconditionError("subset determinization is defined for "
                                "finite mode only");
    auto steps = mask_steps(a);
    const std::uint64_t acc = accepting_mask(a);
    constexpr int kMaxSubsets = 1 << 20;

    std::unordered_map<std::uint64_t, int> id_of;
    std::vector<std::uint64_t> subsets;
    auto intern = [&](std::uint64_t mask) {
        auto [it, fresh] = id_of.emplace(mask, subsets.size());
        if (fresh) {
            subsets.push_back(mask);
            if (static_cast<int>(subsets.size()) > kMaxSubsets)
                throw SizeLimitError("subset construction exceeds " +
                                     std::to_string(kMaxSubsets) + " states");
        }
        return it->second;
    };

    Automaton out;
    out.mode = AcceptanceMode::finite;
    out.alphabet = a.alphabet;
    intern(initial_mask(a));
    std::vector<std::vector<int>> table;  // per subset, per letter target
    for (std::size_t v = 0; v < subsets.size(); ++v) {
        std::vector<int> row(a.num_letters());
        for (int l = 0; l < a.num_letters(); ++l)
            row[l] = intern(mask_step(steps, subsets[v], l));
        table.push_back(std::move(row));
    }
    const int m = static_cast<int>(subsets.size());
    out.states.reserve(m);
    for (int v = 0; v < m; ++v) out.states.push_back("u" + std::to_string(v));
    out.initial.assign(m, false);
    out.initial[0] = true;
    out.accepting.assign(m, false);
    for (int v = 0; v < m; ++v) out.accepting[v] = (subsets[v] & acc) != 0;
    out.delta.assign(m, std::vector<std::vector<int>>(a.num_letters()));
    for (int v = 0; v < m; ++v)
        for (int l = 0; l < a.num_letters(); ++l)
            out.delta[v][l] = {table[v][l]};
    return out;
}

Automaton complete_with_sink(const Automaton& a) {
    if (is_complete(a)) return a;
    Automaton out = a;
    std::string name = "sink";
    while (out.state_index(name) >= 0) name += "_";
    const int sink = out.num_states();
    const bool orphan = out.initial_states().empty();
    out.states.push_back(name);
    out.initial.push_back(orphan);
    out.accepting.push_back(false);
    out.delta.emplace_back(out.num_letters());
    for (int q = 0; q <= sink; ++q)
        for (int l = 0; l < out.num_letters(); ++l)
            if (out.delta[q][l].empty()) out.delta[q][l] = {sink};
    return out;
}

namespace {

std::vector<int> letters_to_indices(const Automaton& a,
                                    const std::vector<std::string>& word) {
    std::vector<int> out;
    out.reserve(word.size());
    for (const auto& name : word) {
        int l = a.letter_index(name);
        if (l < 0)
            throw PreconditionError("letter '" + name + "' not in alphabet");
        out.push_back(l);
    }
    return out;
}

// Configuration graph of reading v cyclically: vertex (q, j) steps on v[j].
LabeledGraph cycle_graph(const Automaton& a, const std::vector<int>& v) {
    const int n = a.num_states();
    const int m = static_cast<int>(v.size());
    LabeledGraph g;
    g.n = n * m;
    g.adj.resize(g.n);
    for (int q = 0; q < n; ++q)
        for (int j = 0; j < m; ++j)
            for (int t : a.delta[q][v[j]])
                g.adj[q * m + j].emplace_back(t * m + (j + 1) % m, v[j]);
    return g;
}

}  // namespace

bool lasso_membership(const Automaton& a, const Lasso& l) {
    if (a.mode != AcceptanceMode::buchi)
        throw PreconditionError("lasso membership is a buchi-mode operation");
    if (l.v.empty()) throw PreconditionError("lasso cycle is empty");
    auto u = letters_to_indices(a, l.u);
    auto v = letters_to_indices(a, l.v);
    auto spoke_end = delta_hat(a, a.initial_states(), u);
    if (spoke_end.empty()) return false;

    LabeledGraph g = cycle_graph(a, v);
    const int m = static_cast<int>(v.size());
    std::vector<int> seeds;
    for (int q : spoke_end) seeds.push_back(q * m);
    auto plain = strip_labels(g);
    auto reach = reachable_from(plain, seeds);
    SccResult scc = scc_decompose(plain);
    for (int c = 0; c < g.n; ++c)
        if (reach[c] && a.accepting[c / m] && scc.nontrivial[scc.comp[c]])
            return true;
    return false;
}

Automaton build_h_nfa(const Automaton& a, const std::string& letter,
                      const std::string& state) {
    int s = a.letter_index(letter);
    if (s < 0) throw PreconditionError("letter '" + letter + "' not in alphabet");
    int q = a.state_index(state);
    if (q < 0) throw PreconditionError("unknown state '" + state + "'");

    Automaton out;
    out.mode = AcceptanceMode::finite;
    out.alphabet = a.alphabet;
    out.states = a.states;
    std::string acc_name = "q_acc";
    while (out.state_index(acc_name) >= 0) acc_name += "_";
    const int q_acc = out.num_states();
    out.states.push_back(acc_name);
    out.initial.assign(out.num_states(), false);
    out.initial[q] = true;
    out.accepting.assign(out.num_states(), false);
    out.accepting[q_acc] = true;
    out.delta = a.delta;
    out.delta.emplace_back(a.num_letters());
    for (int p = 0; p < a.num_states(); ++p) {
        const auto& targets = a.delta[p][s];
        if (std::binary_search(targets.begin(), targets.end(), q))
            out.add_transition(p, s, q_acc);
    }
    return out;
}

namespace {

// Shared body of the G construction: last-letter-tracking product with a
// caller-selected accepting set of (state, letter) pairs.
Automaton g_construction(const Automaton& a,
                         const std::vector<std::pair<int, int>>& accept_at) {
    const int n = a.num_states();
    const int k = a.num_letters();
    const int bot = k;  // second coordinate for "nothing read yet"
    auto vid = [&](int q, int l) { return q * (k + 1) + l; };

    Automaton out;
    out.mode = AcceptanceMode::finite;
    out.alphabet = a.alphabet;
    out.states.resize(n * (k + 1));
    {
        std::unordered_set<std::string> seen;
        bool clash = false;
        for (int q = 0; q < n && !clash; ++q)
            for (int l = 0; l <= k; ++l) {
                std::string name =
                    a.states[q] + "@" + (l == bot ? "^" : a.alphabet[l]);
                if (!seen.insert(name).second) clash = true;
                out.states[vid(q, l)] = name;
            }
        if (clash)
            for (int v = 0; v < n * (k + 1); ++v)
                out.states[v] = "g" + std::to_string(v);
    }
    out.initial.assign(out.num_states(), false);
    for (int q0 : a.initial_states()) out.initial[vid(q0, bot)] = true;
    out.accepting.assign(out.num_states(), false);
    for (auto [letter, state] : accept_at)
        out.accepting[vid(state, letter)] = true;
    out.delta.assign(out.num_states(), std::vector<std::vector<int>>(k));
    for (int q = 0; q < n; ++q)
        for (int l = 0; l <= k; ++l)
            for (int sigma = 0; sigma < k; ++sigma)
                for (int t : a.delta[q][sigma])
                    out.add_transition(vid(q, l), sigma, vid(t, sigma));
    return out;
}

}  // namespace

Automaton build_g_nfa(const Automaton& a, const std::string& letter,
                      const std::string& state) {
    int s = a.letter_index(letter);
    if (s < 0) throw PreconditionError("letter '" + letter + "' not in alphabet");
    int q = a.state_index(state);
    if (q < 0) throw PreconditionError("unknown state '" + state + "'");
    return g_construction(a, {{s, q}});
}

Automaton build_union_g_nfa(const Automaton& a,
                            const std::vector<std::pair<int, int>>& pairs) {
    for (auto [s, q] : pairs)
        if (s < 0 || s >= a.num_letters() || q < 0 || q >= a.num_states())
            throw PreconditionError("accepting pair out of range");
    return g_construction(a, pairs);
}

Automaton guess_next_letter_uba(const Automaton& d) {
    if (d.mode != AcceptanceMode::buchi)
        throw PreconditionError("guess-next-letter transform expects a buchi "
                                "automaton");
    if (!is_deterministic(d))
        throw PreconditionError("guess-next-letter transform requires a "
                                "deterministic automaton");
    Automaton dd = complete_with_sink(d);
    const int n = dd.num_states();
    const int k = dd.num_letters();
    const int p0 = dd.initial_states().at(0);
    auto vid = [&](int p, int x) { return p * k + x; };

    Automaton out;
    out.mode = AcceptanceMode::buchi;
    out.alphabet = dd.alphabet;
    out.states.resize(n * k);
    {
        std::unordered_set<std::string> seen;
        bool clash = false;
        for (int p = 0; p < n && !clash; ++p)
            for (int x = 0; x < k; ++x) {
                std::string name = dd.states[p] + "@" + dd.alphabet[x];
                if (!seen.insert(name).second) clash = true;
                out.states[vid(p, x)] = name;
            }
        if (clash)
            for (int v = 0; v < n * k; ++v)
                out.states[v] = "p" + std::to_string(v);
    }
    out.initial.assign(n * k, false);
    for (int x = 0; x < k; ++x) out.initial[vid(p0, x)] = true;
    out.accepting.assign(n * k, false);
    for (int p = 0; p < n; ++p)
        if (dd.accepting[p])
            for (int x = 0; x < k; ++x) out.accepting[vid(p, x)] = true;
    out.delta.assign(n * k, std::vector<std::vector<int>>(k));
    for (int p = 0; p < n; ++p)
        for (int x = 0; x < k; ++x) {
            const int succ = dd.delta[p][x].at(0);
            for (int y = 0; y < k; ++y)
                out.add_transition(vid(p, x), x, vid(succ, y));
        }
    return out;
}

std::optional<LassoDecomposition> decompose_accepting_lasso(const Automaton& a,
                                                            const Lasso& l) {
    if (a.mode != AcceptanceMode::buchi)
        throw PreconditionError("lasso decomposition is a buchi-mode "
                                "operation");
    if (l.v.empty()) throw PreconditionError("lasso cycle is empty");
    auto u = letters_to_indices(a, l.u);
    auto v = letters_to_indices(a, l.v);
    auto spoke_end = delta_hat(a, a.initial_states(), u);
    if (spoke_end.empty()) return std::nullopt;

    LabeledGraph g = cycle_graph(a, v);
    const int m = static_cast<int>(v.size());
    std::vector<int> seeds;
    for (int q : spoke_end) seeds.push_back(q * m);
    Bfs forward = bfs_labeled(g, seeds);
    auto plain = strip_labels(g);
    SccResult scc = scc_decompose(plain);

    for (int c = 0; c < g.n; ++c) {
        if (!forward.seen[c] || !a.accepting[c / m]) continue;
        if (!scc.nontrivial[scc.comp[c]]) continue;
        // loop c -> c of length >= 1 (exists: c is on a cycle in its SCC)
        std::size_t loop_len = 0;
        {
            bool found = false;
            for (auto [t, letter] : g.adj[c]) {
                (void)letter;
                if (scc.comp[t] != scc.comp[c]) continue;
                Bfs back = bfs_labeled(g, {t}, &scc.comp, scc.comp[c]);
                if (!back.seen[c]) continue;
                loop_len = 1 + path_letters(back, c).size();
                found = true;
                break;
            }
            if (!found)
                throw InternalError("cyclic configuration lost its loop");
        }
        const std::size_t path_len = path_letters(forward, c).size();
        // Shift one full loop so the cut's last letter lies inside v.
        const std::size_t t0 = u.size() + path_len + loop_len;
        auto letter_at = [&](std::size_t pos) {
            return pos < u.size() ? u[pos]
                                  : v[(pos - u.size()) % v.size()];
        };
        LassoDecomposition dec;
        dec.state = a.states[c / m];
        dec.letter = a.alphabet[letter_at(t0 - 1)];
        for (std::size_t i = 0; i < t0; ++i)
            dec.x.push_back(a.alphabet[letter_at(i)]);
        for (std::size_t i = 0; i < loop_len; ++i)
            dec.y.push_back(a.alphabet[letter_at(t0 + i)]);
        return dec;
    }
    return std::nullopt;
}

}  // namespace ubamc
