// Measure representations on [0,1] and {1..K}, the Levy-Prokhorov metric
// (fast coupling algorithm + brute-force oracle), total variation, KL
// divergence, and binning.
//
// Conventions fixed here and relied on everywhere else:
//   - Bins: m equal right-open bins of [0,1], the last bin closed; bin
//     indices are 0-based in code.
//   - Converting a binned measure back to atoms places mass at bin centers
//     (2b+1)/(2m); the round trip satisfies rho(mu, centered) <= 1/(2m).
//   - Discrete labels {1..K} embed into [0,1] at (k - 1/2)/K, i.e. the
//     centers of K equal bins, so label pmfs and continuous measures share
//     one metric.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gridlab/errors.hpp"
#include "gridlab/rational.hpp"

namespace gridlab {

// Nonnegative mass on m equal bins of [0,1].
struct BinnedMeasure {
  int m = 1;
  std::vector<double> weights;

  BinnedMeasure() : weights(1, 0.0) {}
  BinnedMeasure(int m_, std::vector<double> w);

  double total() const;
  bool is_probability(double tol = 1e-12) const;

  // Lambda_m: the uniform distribution at resolution m.
  static BinnedMeasure uniform(int m);
};

// Finitely many atoms on [0,1]; sorted by value, equal values merged.
struct AtomicMeasure {
  std::vector<double> values;
  std::vector<double> masses;

  AtomicMeasure() = default;
  // Builds from unsorted (value, mass) pairs; validates ranges, sorts, merges.
  static AtomicMeasure from_atoms(std::vector<std::pair<double, double>> atoms);

  std::size_t size() const { return values.size(); }
  double total() const;
};

// Exact pmf on {1..K}: numerators over a common denominator.
struct RationalPmf {
  std::int64_t K = 1;
  std::vector<BigInt> numerators;
  BigInt denominator = 1;

  RationalPmf() : numerators(1, BigInt(1)) {}
  RationalPmf(std::int64_t K_, std::vector<BigInt> nums, BigInt den);

  // Canonical form: numerators and denominator divided by their common gcd.
  RationalPmf normalized() const;
  // Value equality (representation independent).
  bool operator==(const RationalPmf& o) const;
  bool operator!=(const RationalPmf& o) const { return !(*this == o); }

  BigRational mass(std::int64_t label) const;  // label in 1..K
  BigRational mean() const;                    // sum of label * mass
  std::vector<double> to_doubles() const;

  // Atoms at the bin-center embedding (k - 1/2)/K.
  AtomicMeasure embed_atoms() const;
};

// ---------------------------------------------------------------- operations

// Levy-Prokhorov distance between equal-total-mass atomic measures.
// Strassen coupling: rho <= eps iff a coupling moves >= total - eps mass
// across pairs with |x - y| <= eps. The max transportable mass M(eps) is a
// step function with breakpoints at pairwise distances; the answer is
// min_k max(d_(k), total - M(d_(k))), clamped to [0, total].
double lp_distance(const AtomicMeasure& mu, const AtomicMeasure& nu);

// Direct definition, brute force: enumerates subsets A of each support and
// finds the least eps with mu(A) <= nu(A^eps) + eps in both directions.
// Handles unequal totals; combined support limited to 14 atoms.
double lp_distance_oracle(const AtomicMeasure& mu, const AtomicMeasure& nu);

// 1/2 sum of |mass differences| over the union of supports / shared bins.
double total_variation(const AtomicMeasure& mu, const AtomicMeasure& nu);
double total_variation(const BinnedMeasure& mu, const BinnedMeasure& nu);

// sum nu_b log(nu_b / base_b), 0 log 0 = 0; +infinity where nu puts mass on
// a base-null bin.
double kl_divergence(const BinnedMeasure& nu, const BinnedMeasure& base);

// Right-open binning (last bin closed); bin() aggregates atom mass per bin,
// center_atoms() is the inverse embedding at bin centers.
int bin_index(double value, int m);
BinnedMeasure bin(const AtomicMeasure& mu, int m);
AtomicMeasure center_atoms(const BinnedMeasure& mu);

// Binned law of the largest of D uniforms: weights are the increments of
// the cdf y^D across the bin grid.
BinnedMeasure binned_sigma_max(int m, int D);

// Pointwise convex combination of same-resolution binned measures.
BinnedMeasure mix_binned(const BinnedMeasure& a, const BinnedMeasure& b, double t);

}  // namespace gridlab
