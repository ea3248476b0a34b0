#include "ubamc/linsolve.hpp"

#include <utility>

#include "ubamc/errors.hpp"
#include "ubamc/graph.hpp"

namespace ubamc {

namespace {

// Every unknown must reach a d > 0 unknown along positive C entries; this
// is what makes lim C^n = 0 and hence the solution unique.
void check_structural_contraction(const LinearSystem& sys) {
    const int n = sys.size();
    std::vector<std::vector<int>> rev(n);
    std::vector<int> seeds;
    for (int i = 0; i < n; ++i) {
        if (sys.d[i].sign() > 0) seeds.push_back(i);
        for (int j = 0; j < n; ++j)
            if (!sys.c[i][j].is_zero()) rev[j].push_back(i);
    }
    auto ok = reachable_from(rev, seeds);
    for (int i = 0; i < n; ++i)
        if (!ok[i])
            throw PreconditionError(
                "structural contraction fails: unknown " + sys.labels[i] +
                " cannot reach an accepting vertex");
}

}  // namespace

std::vector<Rational> solve_unique(const LinearSystem& sys) {
    const int n = sys.size();
    if (static_cast<int>(sys.c.size()) != n ||
        static_cast<int>(sys.labels.size()) != n)
        throw PreconditionError("malformed linear system");
    for (const auto& row : sys.c)
        if (static_cast<int>(row.size()) != n)
            throw PreconditionError("malformed linear system");
    if (n > kDenseSolveCap)
        throw SizeLimitError("linear system has " + std::to_string(n) +
                             " unknowns, dense cap is " +
                             std::to_string(kDenseSolveCap));
    check_structural_contraction(sys);
    if (n == 0) return {};

    // (I - C) x = d, solved by exact elimination. Pivots are chosen by
    // smallest bit size in the column to curb rational growth; ties go to
    // the lowest row.
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    std::vector<Rational> b = sys.d;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a[i][j] = -sys.c[i][j];
            if (i == j) a[i][j] += Rational(1);
        }

    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        std::size_t best_bits = 0;
        for (int r = col; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            std::size_t bits = a[r][col].bit_size();
            if (pivot < 0 || bits < best_bits) {
                pivot = r;
                best_bits = bits;
            }
        }
        if (pivot < 0)
            throw InternalError("uniqueness precondition violated");
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(b[pivot], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            Rational f = a[r][col] / a[col][col];
            a[r][col] = Rational(0);
            for (int j = col + 1; j < n; ++j)
                if (!a[col][j].is_zero()) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }

    std::vector<Rational> x(n, Rational(0));
    for (int r = n - 1; r >= 0; --r) {
        Rational acc = b[r];
        for (int j = r + 1; j < n; ++j)
            if (!a[r][j].is_zero()) acc -= a[r][j] * x[j];
        x[r] = acc / a[r][r];
    }

    for (int i = 0; i < n; ++i) {
        Rational lhs = sys.d[i];
        for (int j = 0; j < n; ++j)
            if (!sys.c[i][j].is_zero()) lhs += sys.c[i][j] * x[j];
        if (!(lhs == x[i]))
            throw InternalError("nonzero residual at " + sys.labels[i]);
    }
    for (int i = 0; i < n; ++i)
        if (!x[i].in_unit_interval())
            throw InternalError("solution outside [0,1] at " + sys.labels[i]);
    return x;
}

ProductSystem build_product_system(const ProductGraph& pg) {
    // Only vertices reachable from the virtual initial row through
    // non-accepting vertices become unknowns. Unreachable parts of the
    // grid contribute nothing to the answer, and they are exactly where
    // run-counting can diverge (making (I - C) singular) even though no
    // trajectory from the initial distribution is affected.
    std::vector<bool> in_system(pg.size(), false);
    std::vector<int> stack;
    for (int v : pg.virtual_ids()) {
        if (pg.tag[v] != VertexTag::unknown) continue;
        in_system[v] = true;
        stack.push_back(v);
    }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& [t, p] : pg.edges[v]) {
            if (pg.tag[t] != VertexTag::unknown || in_system[t]) continue;
            in_system[t] = true;
            stack.push_back(t);
        }
    }

    ProductSystem ps;
    ps.index_of.assign(pg.size(), -1);
    for (int v = 0; v < pg.size(); ++v) {
        if (!in_system[v]) continue;
        ps.index_of[v] = static_cast<int>(ps.vertex_of.size());
        ps.vertex_of.push_back(v);
        ps.sys.labels.push_back(pg.vertex_name(v));
    }
    const int n = static_cast<int>(ps.vertex_of.size());
    ps.sys.c.assign(n, std::vector<Rational>(n, Rational(0)));
    ps.sys.d.assign(n, Rational(0));
    std::vector<bool> counted(pg.num_mc_states, false);
    for (int i = 0; i < n; ++i) {
        const int v = ps.vertex_of[i];
        counted.assign(pg.num_mc_states, false);
        for (const auto& [t, p] : pg.edges[v]) {
            switch (pg.tag[t]) {
                case VertexTag::unknown:
                    ps.sys.c[i][ps.index_of[t]] += p;
                    break;
                case VertexTag::accepting: {
                    // absorb once per chain successor: an accepting step
                    // makes the word itself accepted, run multiplicity is
                    // immaterial here
                    int s = pg.vertices[t].mc_state;
                    if (!counted[s]) {
                        counted[s] = true;
                        ps.sys.d[i] += p;
                    }
                    break;
                }
                case VertexTag::dead:
                    break;
            }
        }
    }
    return ps;
}

std::vector<Rational> reachability_probabilities(
    const std::vector<std::vector<std::pair<int, Rational>>>& rows,
    const std::vector<bool>& target) {
    const int n = static_cast<int>(rows.size());
    if (static_cast<int>(target.size()) != n)
        throw PreconditionError("target vector size mismatch");

    std::vector<std::vector<int>> adj(n), absorbed(n);
    std::vector<int> target_list, zero_list;
    for (int v = 0; v < n; ++v) {
        for (const auto& [t, p] : rows[v]) {
            if (p.is_zero()) continue;
            adj[v].push_back(t);
            if (!target[v]) absorbed[v].push_back(t);
        }
        if (target[v]) target_list.push_back(v);
    }
    auto can_reach_target = reachable_from(reverse_graph(adj), target_list);
    for (int v = 0; v < n; ++v)
        if (!can_reach_target[v]) zero_list.push_back(v);
    // states that can wander into the probability-zero region once targets
    // absorb; everything else that can reach a target does so surely
    auto risky = reachable_from(reverse_graph(absorbed), zero_list);

    std::vector<Rational> value(n, Rational(0));
    std::vector<int> unknown_of(n, -1);
    std::vector<int> unknowns;
    for (int v = 0; v < n; ++v) {
        if (target[v]) {
            value[v] = Rational(1);
        } else if (!can_reach_target[v]) {
            value[v] = Rational(0);
        } else if (!risky[v]) {
            value[v] = Rational(1);
        } else {
            unknown_of[v] = static_cast<int>(unknowns.size());
            unknowns.push_back(v);
        }
    }
    if (unknowns.empty()) return value;

    LinearSystem sys;
    const int m = static_cast<int>(unknowns.size());
    sys.labels.reserve(m);
    for (int v : unknowns) sys.labels.push_back("state " + std::to_string(v));
    sys.c.assign(m, std::vector<Rational>(m, Rational(0)));
    sys.d.assign(m, Rational(0));
    for (int i = 0; i < m; ++i) {
        for (const auto& [t, p] : rows[unknowns[i]]) {
            if (p.is_zero()) continue;
            if (unknown_of[t] >= 0)
                sys.c[i][unknown_of[t]] += p;
            else if (value[t].is_one())
                sys.d[i] += p;
        }
    }
    auto solved = solve_unique(sys);
    for (int i = 0; i < m; ++i) value[unknowns[i]] = solved[i];
    return value;
}

std::vector<Rational> reachability_probabilities(const SubsetChain& chain) {
    return reachability_probabilities(chain.trans, chain.target);
}

}  // namespace ubamc
