// Exact combinatorics of the discrete model: orderings and their greedy
// tables, closed-form extreme pmfs, weight tuples of (D+1)-subsets, the
// density identity, enumeration of deterministic consistent tables, and
// exact convex-hull extreme-point certification.
//
// All arithmetic here is exact rational; nothing in this header touches
// floating point.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gridlab/rational.hpp"
#include "gridlab/strategies.hpp"

namespace gridlab {

// An ordering is a permutation alpha of {1..K} read as
// alpha(1) < alpha(2) < ... < alpha(K): alpha.back() is the most preferred
// label. Stored as a vector with alpha[k-1] = alpha(k).

// Closed form for the kept-label law of the greedy-by-alpha strategy:
// mass (k^D - (k-1)^D) / K^D at label alpha(k).
RationalPmf extreme_sigma(const std::vector<std::int64_t>& alpha, int D);

// Deterministic table keeping the alpha-largest label (lowest index on ties).
StrategyTable greedy_table(const std::vector<std::int64_t>& alpha, int D);

// Builds the canonical deterministic consistent table from a choice of kept
// value per sorted multiset: every tuple keeps the chosen value of its
// multiset at the lowest position holding it. Multisets absent from the map
// must be constant (their choice is forced).
StrategyTable table_from_multiset_choice(std::int64_t K, int D,
                                         const std::map<std::vector<std::int64_t>, std::int64_t>& choice);

// For D+1 distinct labels, the j-th weight counts the D-element subtuples in
// which label j is the kept value. Weights always sum to D+1 (one kept value
// per subtuple). Requires a deterministic consistent table.
std::vector<int> weight_tuple(const StrategyTable& t, const std::vector<std::int64_t>& labels);

struct WeightReport {
  bool all_base_permutation = true;  // every weight tuple a permutation of (D,1,0,...,0)
  std::vector<std::pair<std::vector<std::int64_t>, std::vector<int>>> counterexamples;
};

// Scans every (D+1)-subset of distinct labels and classifies its weight
// tuple against the base pattern (D,1,0,...,0).
WeightReport verify_weight_tuples(const StrategyTable& t);

// Density of the kept-label law relative to uniform, computed from weights:
// f(t) = average over D-tuples v of the weight of t in (t, v), where a
// subtuple with repeated copies of t contributes 1/multiplicity per copy.
// Satisfies f(t) = K * sigma_discrete(table)(t) exactly.
std::vector<BigRational> density_from_weights(const StrategyTable& t);

// All canonical deterministic consistent tables: one kept value per
// non-constant multiset, ties resolved to the lowest position. The number of
// such tables (product over multisets of their distinct-value counts) is
// bounded at 10^6.
std::vector<StrategyTable> enumerate_deterministic_consistent(std::int64_t K, int D);

// Exact membership of x in the convex hull of the given points
// (rational Phase-1 simplex with Bland's rule).
bool in_convex_hull(const std::vector<std::vector<BigRational>>& points,
                    const std::vector<BigRational>& x);

// Distinct kept-label pmfs over all deterministic consistent tables that are
// extreme points of their convex hull. Exact; sized for K <= 5, D <= 3.
std::vector<RationalPmf> extreme_points_of_sigma_polytope(std::int64_t K, int D);

}  // namespace gridlab
