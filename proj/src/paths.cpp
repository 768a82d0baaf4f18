// Histogram-state dynamic programming over all D^n paths.
//
// States are binned empirical histograms. Within the layer of histograms
// summing to s, a state is identified by the colex rank of its strictly
// increasing prefix-sum combination {t_k + k - 1 : k = 1..m-1}, i.e.
// rank = sum_k C(t_k + k - 1, k). Adding one unit to bin b bumps every
// prefix sum from index b on, so a transition's target rank is the source
// rank plus a precomputed suffix increment — no hashing, no histogram keys.

#include "gridlab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace gridlab {

namespace {

constexpr std::size_t kStateLimit = 10'000'000;
constexpr std::uint64_t kSaturated = std::uint64_t{1} << 62;
// Admissibility is a closed ball; distances carry ~1e-16 arithmetic noise, so
// comparing with a slack far below the distance granularity keeps boundary
// states in deterministically.
constexpr double kEpsSlack = 1e-12;

// C(a, k) saturated at 2^62; valid ranks never reach saturation because the
// layer sizes are pre-checked against kStateLimit.
class Binomials {
 public:
  Binomials(int max_a, int max_k) : cols_(static_cast<std::size_t>(max_k) + 1),
                                    table_((static_cast<std::size_t>(max_a) + 1) * cols_, 0) {
    for (int a = 0; a <= max_a; ++a) {
      at(a, 0) = 1;
      for (int k = 1; k <= std::min(a, max_k); ++k) {
        const std::uint64_t v = at(a - 1, k - 1) + at(a - 1, k);
        at(a, k) = std::min(v, kSaturated);
      }
    }
  }
  std::uint64_t operator()(int a, int k) const {
    if (k < 0 || a < 0 || k > a) return 0;
    return table_[static_cast<std::size_t>(a) * cols_ + static_cast<std::size_t>(k)];
  }

 private:
  std::uint64_t& at(int a, int k) { return table_[static_cast<std::size_t>(a) * cols_ + static_cast<std::size_t>(k)]; }
  std::size_t cols_;
  std::vector<std::uint64_t> table_;
};

// Walks the histograms of one layer in rank order: comb[k-1] = t_k + k - 1.
// The colex successor resets every slot that is flush against its neighbor
// and increments the first that is not.
class LayerWalker {
 public:
  LayerWalker(int m, int s) : m_(m), s_(s), comb_(static_cast<std::size_t>(m > 0 ? m - 1 : 0)) {
    for (int k = 1; k < m_; ++k) comb_[static_cast<std::size_t>(k - 1)] = k - 1;  // all prefix sums 0
  }

  void histogram(std::vector<int>& c) const {
    c.assign(static_cast<std::size_t>(m_), 0);
    int prev = 0;
    for (int k = 1; k < m_; ++k) {
      const int t = comb_[static_cast<std::size_t>(k - 1)] - (k - 1);
      c[static_cast<std::size_t>(k - 1)] = t - prev;
      prev = t;
    }
    c[static_cast<std::size_t>(m_ - 1)] = s_ - prev;
  }

  // suffix_bump[b-1] = rank delta from adding one unit to bin b (< m).
  void suffix_bumps(const Binomials& C, std::vector<std::uint64_t>& bump) const {
    bump.assign(static_cast<std::size_t>(m_), 0);
    std::uint64_t acc = 0;
    for (int k = m_ - 1; k >= 1; --k) {
      const int a = comb_[static_cast<std::size_t>(k - 1)];
      acc += C(a + 1, k) - C(a, k);
      bump[static_cast<std::size_t>(k - 1)] = acc;
    }
  }

  bool advance() {
    for (int k = 1; k < m_; ++k) {
      const int next = (k < m_ - 1) ? comb_[static_cast<std::size_t>(k)] : s_ + m_ - 1;
      if (comb_[static_cast<std::size_t>(k - 1)] + 1 < next) {
        comb_[static_cast<std::size_t>(k - 1)] += 1;
        for (int j = 1; j < k; ++j) comb_[static_cast<std::size_t>(j - 1)] = j - 1;
        return true;
      }
    }
    return false;
  }

 private:
  int m_;
  int s_;
  std::vector<int> comb_;
};

std::size_t layer_size(const Binomials& C, int s, int m) {
  if (m == 1) return 1;
  const std::uint64_t v = C(s + m - 1, m - 1);
  if (v >= kSaturated) throw SizeError("histogram state space exceeds the bound");
  return static_cast<std::size_t>(v);
}

double log_uint128(unsigned __int128 x) {
  const auto hi = static_cast<std::uint64_t>(x >> 64);
  const auto lo = static_cast<std::uint64_t>(x);
  const long double v = static_cast<long double>(hi) * 18446744073709551616.0L + static_cast<long double>(lo);
  return static_cast<double>(std::log(v));
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

std::string uint128_to_string(unsigned __int128 x) {
  if (x == 0) return "0";
  std::string digits;
  while (x > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
    x /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

PathCounts path_histogram_dp(const Environment& env, int m) {
  if (m < 1) throw ContractError("bin count must be >= 1");
  if (env.n < 0) throw ContractError("trial count must be >= 0");
  const int n = static_cast<int>(env.n);
  // The table is consulted only through slots k in 1..m-1, so m == 1 needs
  // no table at all (every layer is the single full-last-bin histogram).
  const Binomials C(m > 1 ? n + m : 1, std::max(1, m - 1));
  if (layer_size(C, n, m) > kStateLimit) throw SizeError("histogram state space exceeds the bound");

  PathCounts out;
  out.n = env.n;
  out.D = env.D;
  out.m = m;
  // Exact 128-bit counts while D^n < 2^127.
  out.exact = static_cast<double>(env.n) * std::log2(static_cast<double>(env.D)) < 126.5;

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<unsigned __int128> counts(1, 1);
  std::vector<double> logs(1, 0.0);

  std::vector<int> d(static_cast<std::size_t>(m));
  std::vector<std::uint64_t> bump;
  for (int trial = 0; trial < n; ++trial) {
    std::fill(d.begin(), d.end(), 0);
    for (double v : env.row(trial)) {
      // Discrete labels live on the same lattice as everywhere else.
      const double x = env.model == Model::discrete ? (v - 0.5) / static_cast<double>(env.K) : v;
      d[static_cast<std::size_t>(bin_index(x, m))] += 1;
    }

    const std::size_t next_size = layer_size(C, trial + 1, m);
    std::vector<unsigned __int128> next_counts;
    std::vector<double> next_logs;
    if (out.exact) {
      next_counts.assign(next_size, 0);
    } else {
      next_logs.assign(next_size, neg_inf);
    }

    LayerWalker walker(m, trial);
    std::size_t rank = 0;
    do {
      const bool alive = out.exact ? counts[rank] != 0 : logs[rank] != neg_inf;
      if (alive) {
        walker.suffix_bumps(C, bump);
        for (int b = 0; b < m; ++b) {
          if (d[static_cast<std::size_t>(b)] == 0) continue;
          // Bin m leaves every prefix sum unchanged: bump is 0 there.
          const std::size_t target = rank + (b + 1 < m ? bump[static_cast<std::size_t>(b)] : 0);
          if (out.exact) {
            next_counts[target] += counts[rank] * static_cast<unsigned>(d[static_cast<std::size_t>(b)]);
          } else {
            next_logs[target] = log_add_exp(
                next_logs[target], logs[rank] + std::log(static_cast<double>(d[static_cast<std::size_t>(b)])));
          }
        }
      }
      ++rank;
    } while (walker.advance());

    counts = std::move(next_counts);
    logs = std::move(next_logs);
  }

  // Compact the final layer to reachable states.
  const std::size_t final_size = out.exact ? counts.size() : logs.size();
  LayerWalker walker(m, n);
  std::vector<int> hist;
  std::size_t rank = 0;
  do {
    const bool alive = out.exact ? counts[rank] != 0 : logs[rank] != neg_inf;
    if (alive) {
      walker.histogram(hist);
      out.histograms.insert(out.histograms.end(), hist.begin(), hist.end());
      if (out.exact) {
        out.counts.push_back(counts[rank]);
        out.log_counts.push_back(log_uint128(counts[rank]));
      } else {
        out.log_counts.push_back(logs[rank]);
      }
    }
    ++rank;
  } while (walker.advance());
  if (rank != final_size) throw ContractError("layer walk out of sync with layer size");
  return out;
}

std::vector<double> state_distances(const PathCounts& dp, const BinnedMeasure& nu) {
  if (nu.m != dp.m) throw ContractError("bin resolutions differ");
  if (dp.n < 1) throw ContractError("distances need at least one trial");
  const AtomicMeasure target = center_atoms(nu);
  const std::size_t states = dp.state_count();
  const double unit = 1.0 / static_cast<double>(dp.n);

  std::vector<double> out(states);
  for (std::size_t s = 0; s < states; ++s) {
    AtomicMeasure atoms;  // bin centers ascend: already sorted and distinct
    for (int b = 0; b < dp.m; ++b) {
      const int c = dp.histograms[s * static_cast<std::size_t>(dp.m) + static_cast<std::size_t>(b)];
      if (c > 0) {
        atoms.values.push_back((2.0 * b + 1.0) / (2.0 * dp.m));
        atoms.masses.push_back(c * unit);
      }
    }
    out[s] = lp_distance(atoms, target);
  }
  return out;
}

PathStatsReport path_stats(const Environment& env, const BinnedMeasure& nu, int m,
                           const std::vector<double>& eps_list,
                           const std::vector<std::uint64_t>& ranks) {
  const PathCounts dp = path_histogram_dp(env, m);
  const std::vector<double> dist = state_distances(dp, nu);
  const std::size_t states = dp.state_count();

  std::vector<std::size_t> order(states);
  for (std::size_t i = 0; i < states; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  PathStatsReport report;
  report.n = dp.n;
  report.D = dp.D;
  report.m = dp.m;
  report.exact = dp.exact;
  report.eps_list = eps_list;

  // Admissible-path counts: prefix sums over states sorted by distance.
  for (double eps : eps_list) {
    if (dp.exact) {
      unsigned __int128 total = 0;
      for (std::size_t i = 0; i < states && dist[order[i]] <= eps + kEpsSlack; ++i) total += dp.counts[order[i]];
      report.counts_dec.push_back(uint128_to_string(total));
      const double lg = total == 0 ? -std::numeric_limits<double>::infinity() : log_uint128(total);
      report.log_counts.push_back(lg);
      report.slopes.push_back(lg / static_cast<double>(dp.n));
    } else {
      double lg = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < states && dist[order[i]] <= eps + kEpsSlack; ++i)
        lg = log_add_exp(lg, dp.log_counts[order[i]]);
      report.log_counts.push_back(lg);
      report.slopes.push_back(lg / static_cast<double>(dp.n));
    }
  }

  // Order statistics: the j-th smallest path distance.
  for (std::uint64_t j : ranks) {
    double value = std::numeric_limits<double>::infinity();  // rank beyond D^n
    if (j >= 1) {
      if (dp.exact) {
        unsigned __int128 cum = 0;
        for (std::size_t i = 0; i < states; ++i) {
          cum += dp.counts[order[i]];
          if (cum >= j) {
            value = dist[order[i]];
            break;
          }
        }
      } else {
        const double target = std::log(static_cast<double>(j));
        double cum = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < states; ++i) {
          cum = log_add_exp(cum, dp.log_counts[order[i]]);
          if (cum >= target) {
            value = dist[order[i]];
            break;
          }
        }
      }
    }
    report.order_stats.emplace_back(j, value);
  }
  return report;
}

std::vector<std::pair<std::uint64_t, double>> order_statistics(const Environment& env,
                                                               const BinnedMeasure& nu, int m,
                                                               const std::vector<std::uint64_t>& ranks) {
  return path_stats(env, nu, m, {}, ranks).order_stats;
}

std::vector<std::pair<std::int64_t, double>> entropy_slope(const std::vector<Environment>& envs,
                                                           const BinnedMeasure& nu, double eps,
                                                           int m) {
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(envs.size());
  for (const Environment& env : envs) {
    const PathStatsReport r = path_stats(env, nu, m, {eps}, {});
    out.emplace_back(env.n, r.slopes.front());
  }
  return out;
}

}  // namespace gridlab
