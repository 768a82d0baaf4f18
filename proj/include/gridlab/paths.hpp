// Exhaustive statistics over all D^n paths through an environment without
// touching paths individually: a dynamic program over binned empirical
// histograms. A path keeps one label per trial; its binned empirical
// measure is a histogram c in N^m with sum n, and the number of such
// histograms, C(n+m-1, m-1), is astronomically smaller than D^n.
//
// Counts are exact 128-bit integers while D^n < 2^127; beyond that the DP
// runs in log space and the report flags the mode.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gridlab/measures.hpp"
#include "gridlab/simulate.hpp"

namespace gridlab {

// Final DP layer: all reachable histograms with their exact path counts.
struct PathCounts {
  std::int64_t n = 0;
  int D = 1;
  int m = 1;
  bool exact = true;  // 128-bit counts; false -> log_counts only
  std::vector<int> histograms;  // flat, state-major: histograms[s*m + b]
  std::vector<unsigned __int128> counts;  // exact mode
  std::vector<double> log_counts;         // natural log, always filled

  std::size_t state_count() const { return exact ? counts.size() : log_counts.size(); }
};

// Per-trial transition: count(c + e_b) += count(c) * #{j : bin(U_i^j) = b}.
PathCounts path_histogram_dp(const Environment& env, int m);

// rho between a state's histogram (atoms at bin centers, mass c_b/n) and the
// target, evaluated once per state.
std::vector<double> state_distances(const PathCounts& dp, const BinnedMeasure& nu);

// j-th smallest path distance for each requested rank; +infinity for ranks
// beyond D^n.
std::vector<std::pair<std::uint64_t, double>> order_statistics(const Environment& env,
                                                               const BinnedMeasure& nu, int m,
                                                               const std::vector<std::uint64_t>& ranks);

struct PathStatsReport {
  std::int64_t n = 0;
  int D = 1;
  int m = 1;
  bool exact = true;
  std::vector<double> eps_list;
  std::vector<std::string> counts_dec;  // N_n(eps), exact decimal digits (exact mode)
  std::vector<double> log_counts;       // log N_n(eps)
  std::vector<double> slopes;           // (1/n) log N_n(eps)
  std::vector<std::pair<std::uint64_t, double>> order_stats;
};

// One DP pass serving every query: admissible-path counts N_n(eps) with
// their growth slopes, plus order statistics at the given ranks.
PathStatsReport path_stats(const Environment& env, const BinnedMeasure& nu, int m,
                           const std::vector<double>& eps_list,
                           const std::vector<std::uint64_t>& ranks);

// Growth slopes (1/n) log N_n(eps) across environments of increasing n.
std::vector<std::pair<std::int64_t, double>> entropy_slope(const std::vector<Environment>& envs,
                                                           const BinnedMeasure& nu, double eps,
                                                           int m);

// Decimal rendering of an exact count.
std::string uint128_to_string(unsigned __int128 x);

}  // namespace gridlab
