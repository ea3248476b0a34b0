#pragma once

#include <vector>

namespace ubamc {

std::vector<std::vector<int>> reverse_graph(
    const std::vector<std::vector<int>>& adj);

/// Vertices reachable from any seed (seeds included).
std::vector<bool> reachable_from(const std::vector<std::vector<int>>& adj,
                                 const std::vector<int>& seeds);

struct SccResult {
    std::vector<int> comp;         // component id per vertex
    int count = 0;                 // number of components
    std::vector<bool> nontrivial;  // per component: contains a cycle
};

/// Iterative Tarjan; component ids are in reverse topological order.
SccResult scc_decompose(const std::vector<std::vector<int>>& adj);

}  // namespace ubamc
