// Single-trial strategies: draw D samples, keep exactly one.
//
// Three families:
//   - StrategyTable: discrete labels {1..K}; for every tuple in {1..K}^D a
//     probability vector over the D positions. Entries are exact rationals
//     so chosen-label distributions come out exact.
//   - ScoredStrategy: continuous values in [0,1]; keep the argmax of a score
//     function, ties broken by lowest index.
//   - MixtureStrategy: convex combination of strategies (pick a component at
//     random, then delegate).
//
// "Consistent" means the value-aggregated choice distribution of a tuple
// depends only on its unordered multiset of labels, i.e. relabeling the
// positions never changes which *value* is kept in distribution. This is the
// value-level reading: a deterministic table that resolves equal-label ties
// by position (as the canonical greedy tables here do) still counts as
// consistent, because every tied position holds the same value.

#pragma once

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "gridlab/measures.hpp"
#include "gridlab/rational.hpp"
#include "gridlab/rng.hpp"

namespace gridlab {

struct Strategy;  // recursive via MixtureStrategy

// Dense table indexed by mixed-radix tuple encoding (u_1 most significant).
struct StrategyTable {
  std::int64_t K = 1;
  int D = 1;
  // Layout: entries[tuple_index * D + position], position 0-based.
  std::vector<BigRational> entries;

  StrategyTable();
  // Validates shape, nonnegativity and exact row sums of 1.
  StrategyTable(std::int64_t K_, int D_, std::vector<BigRational> e);

  std::size_t tuple_count() const;
  const BigRational& p(std::size_t tuple_index, int position) const;
  bool is_deterministic() const;  // every vector a 0/1 indicator
  bool operator==(const StrategyTable& o) const;

  static StrategyTable uniform(std::int64_t K, int D);
  static StrategyTable always_first(std::int64_t K, int D);
  // Keep the largest label; among positions holding it, the lowest index.
  static StrategyTable greedy_max(std::int64_t K, int D);
};

// Mixed-radix tuple <-> index, labels in 1..K, u_1 most significant.
std::size_t encode_tuple(const std::vector<std::int64_t>& u, std::int64_t K);
std::vector<std::int64_t> decode_tuple(std::size_t index, std::int64_t K, int D);
std::size_t checked_power(std::int64_t K, int D, std::size_t limit);  // K^D, SizeError above limit

// Keep the sample with the highest score; ties go to the lowest index.
struct ScoredStrategy {
  enum class Score { identity, vee, table };
  Score score = Score::identity;
  std::vector<double> bins;  // piecewise-constant score values when score == table
  int D = 2;

  double score_at(double u) const;  // identity: u; vee: |u - 1/2|; table: bin lookup
};

struct MixtureStrategy {
  std::vector<double> weights;
  std::vector<Strategy> components;
};

struct Strategy {
  std::variant<StrategyTable, ScoredStrategy, MixtureStrategy> v;
};

// Validating combinator: weights convex (sum within 1e-12 of 1), sizes match.
MixtureStrategy mixture(std::vector<Strategy> components, std::vector<double> weights);

// ------------------------------------------------------------------- choose

// Sample the kept index (1-based) for one trial's samples.
int choose(const StrategyTable& t, const std::vector<std::int64_t>& row, SplitMix64& rng);
int choose(const ScoredStrategy& s, const std::vector<double>& row);
// Generic: tables require integer-valued rows in 1..K; mixtures sample a
// component first.
int choose(const Strategy& s, const std::vector<double>& row, SplitMix64& rng);

// ------------------------------------------------- chosen-value distribution

// Exact pmf from per-label fractions (must sum to exactly 1).
RationalPmf pmf_from_fractions(std::int64_t K, const std::vector<BigRational>& q);

// Exact law of the kept label under iid uniform labels:
// sigma(x) * K^D = sum over tuples of sum_k p_k(tuple) * [tuple_k == x].
RationalPmf sigma_discrete(const StrategyTable& t);

// Extends sigma_discrete through mixtures (weights made exact dyadically);
// scored components are rejected.
RationalPmf sigma_discrete_of(const Strategy& s);

// Monte Carlo law of the kept value for a scored strategy, binned; N trials,
// deterministic given seed.
BinnedMeasure sigma_scored_mc(const ScoredStrategy& s, int D, std::int64_t N, int m,
                              std::uint64_t seed);

// P(max of D uniforms <= y) = y^D.
double sigma_max_cdf(double y, int D);

// --------------------------------------------- consistency and relabelings

// Value-aggregated choice distribution of one tuple: label -> probability
// that the kept position holds that label.
std::map<std::int64_t, BigRational> density_value_distribution(const StrategyTable& t,
                                                               const std::vector<std::int64_t>& u);

// True iff every tuple's value-aggregated choice distribution matches that
// of its sorted rearrangement (hence of every rearrangement).
bool is_consistent(const StrategyTable& t);

// Symmetrize over all D! position relabelings (equivalently, the cyclic-shift
// then stabilizer averaging applied in sequence — the two agree exactly).
// Output is position-symmetric, consistent, idempotent under repetition, and
// has the same sigma_discrete as the input, all exactly.
StrategyTable make_consistent(const StrategyTable& t);

// Relabel inputs: p^phi(u_1,...,u_D) = p(phi(u_1),...,phi(u_D)).
// phi must be a bijection of {1..K} (phi[k-1] is the image of label k).
StrategyTable scramble(const StrategyTable& t, const std::vector<std::int64_t>& phi);

// ------------------------------------------------ density value distribution

// Empirical distribution of equally weighted values; cdf(t) = fraction <= t.
struct EmpiricalCdf {
  std::vector<double> values;  // sorted
  double cdf(double t) const;
};

// Distribution of the chosen-value density (relative to uniform) evaluated at
// a uniform point: estimate the density on m bins by Monte Carlo, then weight
// each bin's density value by 1/m. For the keep-the-max strategy this tends
// to P(f <= t) = (t/D)^(1/(D-1)).
EmpiricalCdf density_cdf_mc(const ScoredStrategy& s, int D, std::int64_t N, int m,
                            std::uint64_t seed);

}  // namespace gridlab
