#pragma once

#include <string>
#include <vector>

#include "ubamc/product.hpp"
#include "ubamc/rational.hpp"

namespace ubamc {

/// The fixed-point system xi = C xi + d over an ordered list of unknowns.
/// C is nonnegative; every unknown must reach a d > 0 unknown through
/// positive C entries (structural contraction, the uniqueness argument
/// made executable). Row sums of C + d usually stay <= 1 but several
/// simultaneously live automaton targets can push one past 1 without
/// breaking uniqueness; only the contraction structure is checked.
struct LinearSystem {
    std::vector<std::string> labels;  // diagnostic name per unknown
    std::vector<std::vector<Rational>> c;
    std::vector<Rational> d;

    int size() const { return static_cast<int>(d.size()); }
};

inline constexpr int kDenseSolveCap = 2000;

/// Unique solution of xi = C xi + d by exact Gaussian elimination on
/// (I - C) xi = d. Checks structural contraction first and names an
/// offending unknown on failure (PreconditionError). A singular matrix
/// past that check, a nonzero residual, or a solution entry outside
/// [0,1] is an InternalError. Systems beyond kDenseSolveCap unknowns
/// are refused with SizeLimitError.
std::vector<Rational> solve_unique(const LinearSystem& sys);

/// The equation system of a product graph: one unknown per
/// VertexTag::unknown vertex reachable from the virtual initial row
/// through non-accepting vertices, C entries from edges into unknown
/// vertices, d entries from one-step absorption into accepting vertices
/// (counted once per chain successor state, not per accepting automaton
/// state). Unreachable grid vertices are excluded: they cannot influence
/// the answer, and their run counts may diverge.
struct ProductSystem {
    LinearSystem sys;
    std::vector<int> vertex_of;  // product vertex per unknown
    std::vector<int> index_of;   // unknown index per product vertex, -1 if none
};

ProductSystem build_product_system(const ProductGraph& pg);

/// Probability of eventually entering a target state, per state, for a
/// chain given as sparse rows (row probabilities summing to 1). Targets
/// get 1; states that cannot reach a target get 0; states that cannot
/// avoid the targets get 1 without solving; the remainder is solved by
/// solve_unique.
std::vector<Rational> reachability_probabilities(
    const std::vector<std::vector<std::pair<int, Rational>>>& rows,
    const std::vector<bool>& target);

std::vector<Rational> reachability_probabilities(const SubsetChain& chain);

}  // namespace ubamc
