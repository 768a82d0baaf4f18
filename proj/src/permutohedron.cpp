// Ordering-induced strategies, weight tuples, the density identity, and
// exact extreme-point certification of the kept-label polytope.

#include "gridlab/permutohedron.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>

namespace gridlab {

namespace {

constexpr std::size_t kTableLimit = 1'000'000;   // enumerated-table bound
constexpr std::size_t kScanLimit = 10'000'000;   // (D+1)-tuple scan bound

void validate_ordering(const std::vector<std::int64_t>& alpha) {
  const std::int64_t K = static_cast<std::int64_t>(alpha.size());
  if (K < 1) throw ContractError("ordering is empty");
  std::vector<bool> seen(alpha.size(), false);
  for (std::int64_t x : alpha) {
    if (x < 1 || x > K || seen[static_cast<std::size_t>(x - 1)])
      throw ContractError("ordering is not a permutation of {1..K}");
    seen[static_cast<std::size_t>(x - 1)] = true;
  }
}

void require_deterministic_consistent(const StrategyTable& t) {
  if (!t.is_deterministic()) throw ContractError("table is not deterministic");
  if (!is_consistent(t)) throw ContractError("table is not consistent");
}

// Kept value of a tuple under a deterministic table: the unique value whose
// aggregated choice probability is 1.
std::int64_t kept_value(const StrategyTable& t, const std::vector<std::int64_t>& u) {
  const auto dist = density_value_distribution(t, u);
  for (const auto& [value, mass] : dist) {
    if (mass == 1) return value;
  }
  throw ContractError("table is not deterministic");
}

// All nondecreasing D-tuples over {1..K}, in lexicographic order.
std::vector<std::vector<std::int64_t>> sorted_multisets(std::int64_t K, int D) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> cur(static_cast<std::size_t>(D));
  const std::function<void(int, std::int64_t)> rec = [&](int pos, std::int64_t low) {
    if (pos == D) {
      out.push_back(cur);
      return;
    }
    for (std::int64_t v = low; v <= K; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, v);
    }
  };
  rec(0, 1);
  return out;
}

}  // namespace

RationalPmf extreme_sigma(const std::vector<std::int64_t>& alpha, int D) {
  validate_ordering(alpha);
  if (D < 1) throw ContractError("draw count must be >= 1");
  const std::int64_t K = static_cast<std::int64_t>(alpha.size());
  const BigInt den = ipow(K, D);
  std::vector<BigInt> nums(alpha.size(), BigInt(0));
  for (std::int64_t k = 1; k <= K; ++k) {
    nums[static_cast<std::size_t>(alpha[static_cast<std::size_t>(k - 1)] - 1)] =
        ipow(k, D) - ipow(k - 1, D);
  }
  return RationalPmf(K, std::move(nums), den).normalized();
}

StrategyTable greedy_table(const std::vector<std::int64_t>& alpha, int D) {
  validate_ordering(alpha);
  const std::int64_t K = static_cast<std::int64_t>(alpha.size());
  std::vector<std::int64_t> rank(alpha.size());
  for (std::int64_t k = 1; k <= K; ++k)
    rank[static_cast<std::size_t>(alpha[static_cast<std::size_t>(k - 1)] - 1)] = k;

  const std::size_t count = checked_power(K, D, kScanLimit);
  std::vector<BigRational> e(count * static_cast<std::size_t>(D), BigRational(0));
  for (std::size_t ti = 0; ti < count; ++ti) {
    const std::vector<std::int64_t> u = decode_tuple(ti, K, D);
    std::size_t best = 0;
    for (std::size_t i = 1; i < u.size(); ++i) {
      if (rank[static_cast<std::size_t>(u[i] - 1)] > rank[static_cast<std::size_t>(u[best] - 1)]) best = i;
    }
    e[ti * static_cast<std::size_t>(D) + best] = 1;
  }
  return StrategyTable(K, D, std::move(e));
}

StrategyTable table_from_multiset_choice(
    std::int64_t K, int D, const std::map<std::vector<std::int64_t>, std::int64_t>& choice) {
  const std::size_t count = checked_power(K, D, kScanLimit);
  std::vector<BigRational> e(count * static_cast<std::size_t>(D), BigRational(0));
  for (std::size_t ti = 0; ti < count; ++ti) {
    const std::vector<std::int64_t> u = decode_tuple(ti, K, D);
    std::vector<std::int64_t> key = u;
    std::sort(key.begin(), key.end());
    std::int64_t value;
    const auto it = choice.find(key);
    if (it != choice.end()) {
      value = it->second;
    } else if (key.front() == key.back()) {
      value = key.front();  // constant multiset: forced
    } else {
      throw ContractError("no kept value chosen for a non-constant multiset");
    }
    const auto pos = std::find(u.begin(), u.end(), value);
    if (pos == u.end()) throw ContractError("chosen value does not occur in its multiset");
    e[ti * static_cast<std::size_t>(D) + static_cast<std::size_t>(pos - u.begin())] = 1;
  }
  return StrategyTable(K, D, std::move(e));
}

std::vector<int> weight_tuple(const StrategyTable& t, const std::vector<std::int64_t>& labels) {
  require_deterministic_consistent(t);
  if (labels.size() != static_cast<std::size_t>(t.D) + 1)
    throw ContractError("weight tuple needs D+1 labels");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > t.K) throw ContractError("label out of range");
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) throw ContractError("weight tuple labels must be distinct");
    }
  }
  std::vector<int> w(labels.size(), 0);
  std::vector<std::int64_t> sub(labels.size() - 1);
  for (std::size_t omit = 0; omit < labels.size(); ++omit) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i != omit) sub[n++] = labels[i];
    }
    const std::int64_t kept = kept_value(t, sub);
    const auto it = std::find(labels.begin(), labels.end(), kept);
    w[static_cast<std::size_t>(it - labels.begin())] += 1;
  }
  return w;
}

WeightReport verify_weight_tuples(const StrategyTable& t) {
  require_deterministic_consistent(t);
  checked_power(t.K, t.D + 1, kScanLimit);
  WeightReport report;
  if (t.K < t.D + 1) return report;  // no distinct (D+1)-subsets: vacuously true

  std::vector<int> base(static_cast<std::size_t>(t.D) + 1, 0);
  base[base.size() - 1] = t.D;
  base[base.size() - 2] = 1;  // sorted pattern (0,...,0,1,D)

  // Ascending combinations of D+1 distinct labels.
  std::vector<std::int64_t> combo(static_cast<std::size_t>(t.D) + 1);
  const std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t pos, std::int64_t low) {
    if (pos == combo.size()) {
      std::vector<int> w = weight_tuple(t, combo);
      std::vector<int> sorted = w;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != base) {
        report.all_base_permutation = false;
        report.counterexamples.emplace_back(combo, std::move(w));
      }
      return;
    }
    for (std::int64_t v = low; v <= t.K - static_cast<std::int64_t>(combo.size() - pos) + 1; ++v) {
      combo[pos] = v;
      rec(pos + 1, v + 1);
    }
  };
  rec(0, 1);
  return report;
}

std::vector<BigRational> density_from_weights(const StrategyTable& t) {
  require_deterministic_consistent(t);
  const std::size_t count = checked_power(t.K, t.D, kScanLimit);
  const BigInt scale = ipow(t.K, t.D);
  std::vector<BigRational> f(static_cast<std::size_t>(t.K), BigRational(0));
  std::vector<std::int64_t> sub(static_cast<std::size_t>(t.D));
  for (std::int64_t label = 1; label <= t.K; ++label) {
    BigRational acc = 0;
    for (std::size_t vi = 0; vi < count; ++vi) {
      const std::vector<std::int64_t> v = decode_tuple(vi, t.K, t.D);
      // Subtuples of (label, v_1, ..., v_D) containing the leading label:
      // drop one v_k, keep the label in front.
      for (int k = 0; k < t.D; ++k) {
        sub[0] = label;
        std::size_t n = 1;
        for (int j = 0; j < t.D; ++j) {
          if (j != k) sub[n++] = v[static_cast<std::size_t>(j)];
        }
        if (kept_value(t, sub) != label) continue;
        const auto mult = std::count(sub.begin(), sub.end(), label);
        acc += BigRational(1, mult);
      }
    }
    f[static_cast<std::size_t>(label - 1)] = acc / BigRational(scale);
  }
  return f;
}

std::vector<StrategyTable> enumerate_deterministic_consistent(std::int64_t K, int D) {
  if (K < 1) throw ContractError("label count must be >= 1");
  if (D < 1) throw ContractError("draw count must be >= 1");
  const std::vector<std::vector<std::int64_t>> multisets = sorted_multisets(K, D);

  // Free parameters: one kept value per non-constant multiset.
  std::vector<std::vector<std::int64_t>> keys;
  std::vector<std::vector<std::int64_t>> options;
  std::size_t total = 1;
  for (const auto& ms : multisets) {
    std::vector<std::int64_t> distinct = ms;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) continue;
    if (total > kTableLimit / distinct.size()) throw SizeError("too many tables to enumerate");
    total *= distinct.size();
    keys.push_back(ms);
    options.push_back(std::move(distinct));
  }

  std::vector<StrategyTable> out;
  out.reserve(total);
  std::vector<std::size_t> pick(keys.size(), 0);
  for (;;) {
    std::map<std::vector<std::int64_t>, std::int64_t> choice;
    for (std::size_t i = 0; i < keys.size(); ++i) choice[keys[i]] = options[i][pick[i]];
    out.push_back(table_from_multiset_choice(K, D, choice));
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < options[i].size()) break;
      pick[i] = 0;
    }
    if (i == pick.size()) break;
  }
  return out;
}

bool in_convex_hull(const std::vector<std::vector<BigRational>>& points,
                    const std::vector<BigRational>& x) {
  if (points.empty()) return false;
  const std::size_t dim = x.size();
  for (const auto& p : points) {
    if (p.size() != dim) throw ContractError("hull points have mismatched dimension");
  }

  // Phase-1 simplex, exact rationals, Bland's rule. Feasibility of
  // sum lambda_i p_i = x, sum lambda_i = 1, lambda >= 0.
  const std::size_t n = points.size();
  const std::size_t m = dim + 1;
  std::vector<std::vector<BigRational>> T(m, std::vector<BigRational>(n + m + 1, BigRational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = (i < dim) ? points[j][i] : BigRational(1);
    T[i][n + m] = (i < dim) ? x[i] : BigRational(1);
    if (T[i][n + m] < 0) {
      for (auto& c : T[i]) c = -c;
    }
    T[i][n + i] = 1;
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // Reduced-cost row for minimizing the artificial sum; objective = -r_rhs.
  std::vector<BigRational> r(n + m + 1, BigRational(0));
  for (std::size_t j = n; j < n + m; ++j) r[j] = 1;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= n + m; ++j) r[j] -= T[i][j];
  }

  for (;;) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (r[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == n + m) break;  // optimal

    std::size_t leave = m;
    BigRational best_ratio = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      const BigRational ratio = T[i][n + m] / T[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) throw ContractError("phase-1 simplex became unbounded");

    const BigRational pivot = T[leave][enter];
    for (auto& c : T[leave]) c /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      const BigRational factor = T[i][enter];
      for (std::size_t j = 0; j <= n + m; ++j) T[i][j] -= factor * T[leave][j];
    }
    if (r[enter] != 0) {
      const BigRational factor = r[enter];
      for (std::size_t j = 0; j <= n + m; ++j) r[j] -= factor * T[leave][j];
    }
    basis[leave] = enter;
  }
  return r[n + m] == 0;  // artificial sum driven to zero
}

std::vector<RationalPmf> extreme_points_of_sigma_polytope(std::int64_t K, int D) {
  if (K > 5 || D > 3) throw SizeError("extreme-point certification sized for K <= 5, D <= 3");
  const std::vector<StrategyTable> tables = enumerate_deterministic_consistent(K, D);

  std::vector<RationalPmf> distinct;
  for (const StrategyTable& t : tables) {
    RationalPmf pmf = sigma_discrete(t);
    if (std::find(distinct.begin(), distinct.end(), pmf) == distinct.end()) {
      distinct.push_back(std::move(pmf));
    }
  }

  std::vector<std::vector<BigRational>> vectors;
  vectors.reserve(distinct.size());
  for (const RationalPmf& p : distinct) {
    std::vector<BigRational> v;
    v.reserve(static_cast<std::size_t>(K));
    for (std::int64_t k = 1; k <= K; ++k) v.push_back(p.mass(k));
    vectors.push_back(std::move(v));
  }

  std::vector<RationalPmf> extremes;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    std::vector<std::vector<BigRational>> others;
    others.reserve(vectors.size() - 1);
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      if (j != i) others.push_back(vectors[j]);
    }
    if (!in_convex_hull(others, vectors[i])) extremes.push_back(distinct[i]);
  }
  return extremes;
}

}  // namespace gridlab
