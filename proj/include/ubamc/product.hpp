#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ubamc/model.hpp"

namespace ubamc {

enum class VertexTag { accepting, dead, unknown };

/// Product graph of a chain M and an automaton A over alphabet = M.states.
/// Vertices are pairs (s, q); (s,q) -> (s',q') is an edge exactly when
/// P(s,s') > 0 and q' ∈ δ(q, s'), carrying weight P(s,s'). A virtual
/// initial row (s0, q0) for q0 ∈ Q0 is appended after the real vertices,
/// with edges weighted by the initial distribution.
struct ProductVertex {
    int mc_state = -1;  // -1 on the virtual initial row
    int aut_state = -1;
};

struct ProductGraph {
    std::vector<ProductVertex> vertices;  // real row-major (s*|Q|+q), then s0 row
    std::vector<std::vector<std::pair<int, Rational>>> edges;
    std::vector<bool> accepting;  // q ∈ F
    std::vector<VertexTag> tag;
    int num_mc_states = 0;
    int num_aut_states = 0;
    std::vector<std::string> mc_names, aut_names;

    int size() const { return static_cast<int>(vertices.size()); }
    /// Id of a real vertex.
    int vertex_id(int s, int q) const { return s * num_aut_states + q; }
    /// Ids of the virtual initial row, in Q0 order.
    std::vector<int> virtual_ids() const;
    std::string vertex_name(int v) const;
};

struct VertexPartition {
    std::vector<int> accepting, dead, unknown;
};

/// Extends M with a fresh initial state s0 (appended last) whose outgoing
/// row is M's initial distribution; the new initial distribution is the
/// point mass on s0. Labels are dropped: s0 has no meaningful letter.
MarkovChain add_virtual_initial(const MarkovChain& m);

/// Builds the product graph with classification tags filled in. Throws
/// PreconditionError unless A.alphabet equals M.states elementwise.
ProductGraph build_product(const MarkovChain& m, const Automaton& a);

/// Recomputes the partition from the graph structure: accepting = q ∈ F,
/// dead = cannot reach an accepting vertex, unknown = the rest (each such
/// vertex can reach an accepting one).
VertexPartition classify_vertices(const ProductGraph& pg);

std::string to_dot(const ProductGraph& pg);

/// Deterministic-in-trajectory subset product. State 0 is the virtual
/// initial (s0, Q0) with mc_state = -1; after the chain emits its first
/// state s the subset becomes delta_hat(Q0, s). Only reachable pairs are
/// materialized. Row probabilities sum to exactly 1.
struct SubsetChain {
    std::vector<int> mc_state;          // -1 at state 0
    std::vector<std::uint64_t> subset;  // automaton state mask
    std::vector<std::vector<std::pair<int, Rational>>> trans;
    std::vector<bool> target;

    int size() const { return static_cast<int>(mc_state.size()); }
};

inline constexpr std::size_t kSubsetChainCap = 200000;

/// target_predicate(s, U) is consulted for every materialized state,
/// including the virtual initial with s = -1 (callers that exclude the
/// empty word simply return false there). Throws SizeLimitError when more
/// than cap states become reachable.
SubsetChain build_subset_chain(
    const MarkovChain& m, const Automaton& a,
    const std::function<bool(int, std::uint64_t)>& target_predicate,
    std::size_t cap = kSubsetChainCap);

}  // namespace ubamc
