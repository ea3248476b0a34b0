#include "ubamc/product.hpp"

#include <deque>
#include <sstream>
#include <unordered_map>

#include "ubamc/errors.hpp"

namespace ubamc {

std::vector<int> ProductGraph::virtual_ids() const {
    std::vector<int> ids;
    for (int v = num_mc_states * num_aut_states; v < size(); ++v)
        ids.push_back(v);
    return ids;
}

std::string ProductGraph::vertex_name(int v) const {
    const auto& pv = vertices[v];
    std::string s = pv.mc_state < 0 ? "s0" : mc_names[pv.mc_state];
    return "(" + s + "," + aut_names[pv.aut_state] + ")";
}

MarkovChain add_virtual_initial(const MarkovChain& m) {
    MarkovChain out;
    std::string name = "s0";
    while (m.index_of(name) >= 0) name += "_";
    out.states = m.states;
    out.states.push_back(name);
    const int n = m.size();
    out.trans.assign(n + 1, std::vector<Rational>(n + 1, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.trans[i][j] = m.trans[i][j];
    for (int j = 0; j < n; ++j) out.trans[n][j] = m.init[j];
    out.init.assign(n + 1, Rational(0));
    out.init[n] = Rational(1);
    return out;
}

namespace {

void require_aligned_alphabet(const MarkovChain& m, const Automaton& a) {
    if (a.alphabet != m.states)
        throw PreconditionError(
            "automaton alphabet must equal the chain's state list (rename "
            "the automaton first)");
}

}  // namespace

ProductGraph build_product(const MarkovChain& m, const Automaton& a) {
    require_aligned_alphabet(m, a);
    ProductGraph pg;
    pg.num_mc_states = m.size();
    pg.num_aut_states = a.num_states();
    pg.mc_names = m.states;
    pg.aut_names = a.states;

    const int real = m.size() * a.num_states();
    for (int s = 0; s < m.size(); ++s)
        for (int q = 0; q < a.num_states(); ++q)
            pg.vertices.push_back({s, q});
    for (int q0 : a.initial_states()) pg.vertices.push_back({-1, q0});

    pg.edges.resize(pg.size());
    pg.accepting.assign(pg.size(), false);
    for (int v = 0; v < pg.size(); ++v)
        pg.accepting[v] = a.accepting[pg.vertices[v].aut_state];

    for (int s = 0; s < m.size(); ++s)
        for (int q = 0; q < a.num_states(); ++q) {
            auto& out = pg.edges[pg.vertex_id(s, q)];
            for (int t = 0; t < m.size(); ++t) {
                if (m.trans[s][t].is_zero()) continue;
                for (int qt : a.delta[q][t])
                    out.emplace_back(pg.vertex_id(t, qt), m.trans[s][t]);
            }
        }
    for (int i = real; i < pg.size(); ++i) {
        const int q0 = pg.vertices[i].aut_state;
        auto& out = pg.edges[i];
        for (int t = 0; t < m.size(); ++t) {
            if (m.init[t].is_zero()) continue;
            for (int qt : a.delta[q0][t])
                out.emplace_back(pg.vertex_id(t, qt), m.init[t]);
        }
    }

    auto part = classify_vertices(pg);
    pg.tag.assign(pg.size(), VertexTag::unknown);
    for (int v : part.accepting) pg.tag[v] = VertexTag::accepting;
    for (int v : part.dead) pg.tag[v] = VertexTag::dead;
    return pg;
}

VertexPartition classify_vertices(const ProductGraph& pg) {
    std::vector<std::vector<int>> rev(pg.size());
    for (int v = 0; v < pg.size(); ++v)
        for (const auto& [t, p] : pg.edges[v]) rev[t].push_back(v);
    std::vector<bool> can_accept(pg.size(), false);
    std::deque<int> queue;
    for (int v = 0; v < pg.size(); ++v)
        if (pg.accepting[v]) {
            can_accept[v] = true;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : rev[v])
            if (!can_accept[w]) {
                can_accept[w] = true;
                queue.push_back(w);
            }
    }
    VertexPartition part;
    for (int v = 0; v < pg.size(); ++v) {
        if (pg.accepting[v])
            part.accepting.push_back(v);
        else if (!can_accept[v])
            part.dead.push_back(v);
        else
            part.unknown.push_back(v);
    }
    return part;
}

std::string to_dot(const ProductGraph& pg) {
    std::ostringstream out;
    out << "digraph product {\n";
    out << "  rankdir=LR;\n";
    for (int v = 0; v < pg.size(); ++v) {
        const char* shape = "ellipse";
        const char* fill = "white";
        switch (pg.tag[v]) {
            case VertexTag::accepting:
                shape = "doublecircle";
                fill = "palegreen";
                break;
            case VertexTag::dead:
                fill = "lightgray";
                break;
            case VertexTag::unknown:
                break;
        }
        out << "  v" << v << " [label=\"" << pg.vertex_name(v) << "\" shape="
            << shape << " style=filled fillcolor=" << fill << "];\n";
    }
    for (int v = 0; v < pg.size(); ++v)
        for (const auto& [t, p] : pg.edges[v])
            out << "  v" << v << " -> v" << t << " [label=\""
                << p.fraction_str() << "\"];\n";
    out << "}\n";
    return out.str();
}

SubsetChain build_subset_chain(
    const MarkovChain& m, const Automaton& a,
    const std::function<bool(int, std::uint64_t)>& target_predicate,
    std::size_t cap) {
    require_aligned_alphabet(m, a);
    auto steps = mask_steps(a);

    SubsetChain chain;
    std::unordered_map<std::uint64_t, std::unordered_map<int, int>> id_of;
    auto intern = [&](int s, std::uint64_t subset) {
        auto& slot = id_of[subset];
        auto [it, fresh] = slot.emplace(s, chain.size());
        if (fresh) {
            chain.mc_state.push_back(s);
            chain.subset.push_back(subset);
            if (chain.mc_state.size() > cap)
                throw SizeLimitError("subset chain exceeds " +
                                     std::to_string(cap) + " states");
        }
        return it->second;
    };

    intern(-1, initial_mask(a));
    for (int v = 0; v < chain.size(); ++v) {
        const int s = chain.mc_state[v];
        const std::uint64_t u = chain.subset[v];
        std::vector<std::pair<int, Rational>> row;
        const auto& dist = s < 0 ? m.init : m.trans[s];
        for (int t = 0; t < m.size(); ++t) {
            if (dist[t].is_zero()) continue;
            row.emplace_back(intern(t, mask_step(steps, u, t)), dist[t]);
        }
        chain.trans.push_back(std::move(row));
    }
    chain.target.resize(chain.size());
    for (int v = 0; v < chain.size(); ++v)
        chain.target[v] = target_predicate(chain.mc_state[v], chain.subset[v]);
    return chain;
}

}  // namespace ubamc
