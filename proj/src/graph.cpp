#include "ubamc/graph.hpp"

#include <algorithm>
#include <deque>
#include <utility>

namespace ubamc {

std::vector<std::vector<int>> reverse_graph(
    const std::vector<std::vector<int>>& adj) {
    std::vector<std::vector<int>> rev(adj.size());
    for (std::size_t v = 0; v < adj.size(); ++v)
        for (int t : adj[v]) rev[t].push_back(static_cast<int>(v));
    return rev;
}

std::vector<bool> reachable_from(const std::vector<std::vector<int>>& adj,
                                 const std::vector<int>& seeds) {
    std::vector<bool> seen(adj.size(), false);
    std::deque<int> queue;
    for (int s : seeds)
        if (!seen[s]) {
            seen[s] = true;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int t : adj[v])
            if (!seen[t]) {
                seen[t] = true;
                queue.push_back(t);
            }
    }
    return seen;
}

SccResult scc_decompose(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    SccResult res;
    res.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    std::vector<std::pair<int, std::size_t>> call;  // (vertex, edge cursor)
    int next_index = 0;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, cursor] = call.back();
            if (cursor < adj[v].size()) {
                int t = adj[v][cursor++];
                if (index[t] == -1) {
                    index[t] = low[t] = next_index++;
                    stack.push_back(t);
                    on_stack[t] = true;
                    call.emplace_back(t, 0);
                } else if (on_stack[t]) {
                    low[v] = std::min(low[v], index[t]);
                }
            } else {
                if (low[v] == index[v]) {
                    int id = res.count++;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        res.comp[w] = id;
                    } while (w != v);
                }
                int done = v;
                call.pop_back();
                if (!call.empty())
                    low[call.back().first] =
                        std::min(low[call.back().first], low[done]);
            }
        }
    }

    std::vector<int> size(res.count, 0);
    res.nontrivial.assign(res.count, false);
    for (int v = 0; v < n; ++v) ++size[res.comp[v]];
    for (int v = 0; v < n; ++v) {
        if (size[res.comp[v]] > 1) {
            res.nontrivial[res.comp[v]] = true;
            continue;
        }
        for (int t : adj[v])
            if (t == v) res.nontrivial[res.comp[v]] = true;
    }
    return res;
}

}  // namespace ubamc
