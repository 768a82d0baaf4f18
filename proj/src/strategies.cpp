// Strategy families and their chosen-value distributions.

#include "gridlab/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace gridlab {

namespace {

constexpr std::size_t kEnumLimit = 10'000'000;  // K^D enumeration bound

std::int64_t factorial_bounded(int D) {
  std::int64_t f = 1;
  for (int i = 2; i <= D; ++i) f *= i;
  return f;
}

void check_label_row(const std::vector<std::int64_t>& row, std::int64_t K, int D) {
  if (row.size() != static_cast<std::size_t>(D)) throw ContractError("row length does not match D");
  for (std::int64_t u : row) {
    if (u < 1 || u > K) throw ContractError("label out of range");
  }
}

void check_value_row(const std::vector<double>& row, int D) {
  if (row.size() != static_cast<std::size_t>(D)) throw ContractError("row length does not match D");
  for (double v : row) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) throw ContractError("value outside [0,1]");
  }
}

}  // namespace

// ------------------------------------------------------------- StrategyTable

StrategyTable::StrategyTable() : entries(1, BigRational(1)) {}

StrategyTable::StrategyTable(std::int64_t K_, int D_, std::vector<BigRational> e)
    : K(K_), D(D_), entries(std::move(e)) {
  if (K < 1) throw ContractError("label count must be >= 1");
  if (D < 1) throw ContractError("draw count must be >= 1");
  const std::size_t count = checked_power(K, D, kEnumLimit);
  if (entries.size() != count * static_cast<std::size_t>(D))
    throw ContractError("table entry count does not match K^D * D");
  for (std::size_t t = 0; t < count; ++t) {
    BigRational sum = 0;
    for (int i = 0; i < D; ++i) {
      const BigRational& x = entries[t * static_cast<std::size_t>(D) + static_cast<std::size_t>(i)];
      if (x < 0) throw ContractError("choice probability is negative");
      sum += x;
    }
    if (sum != 1) throw ContractError("choice probabilities do not sum to 1");
  }
}

std::size_t StrategyTable::tuple_count() const {
  return entries.size() / static_cast<std::size_t>(D);
}

const BigRational& StrategyTable::p(std::size_t tuple_index, int position) const {
  return entries[tuple_index * static_cast<std::size_t>(D) + static_cast<std::size_t>(position)];
}

bool StrategyTable::is_deterministic() const {
  for (const BigRational& x : entries) {
    if (x != 0 && x != 1) return false;
  }
  return true;
}

bool StrategyTable::operator==(const StrategyTable& o) const {
  return K == o.K && D == o.D && entries == o.entries;
}

StrategyTable StrategyTable::uniform(std::int64_t K, int D) {
  const std::size_t count = checked_power(K, D, kEnumLimit);
  std::vector<BigRational> e(count * static_cast<std::size_t>(D), BigRational(1, D));
  return StrategyTable(K, D, std::move(e));
}

StrategyTable StrategyTable::always_first(std::int64_t K, int D) {
  const std::size_t count = checked_power(K, D, kEnumLimit);
  std::vector<BigRational> e(count * static_cast<std::size_t>(D), BigRational(0));
  for (std::size_t t = 0; t < count; ++t) e[t * static_cast<std::size_t>(D)] = 1;
  return StrategyTable(K, D, std::move(e));
}

StrategyTable StrategyTable::greedy_max(std::int64_t K, int D) {
  const std::size_t count = checked_power(K, D, kEnumLimit);
  std::vector<BigRational> e(count * static_cast<std::size_t>(D), BigRational(0));
  for (std::size_t t = 0; t < count; ++t) {
    const std::vector<std::int64_t> u = decode_tuple(t, K, D);
    const std::size_t arg = static_cast<std::size_t>(
        std::max_element(u.begin(), u.end()) - u.begin());  // first max
    e[t * static_cast<std::size_t>(D) + arg] = 1;
  }
  return StrategyTable(K, D, std::move(e));
}

std::size_t checked_power(std::int64_t K, int D, std::size_t limit) {
  std::size_t count = 1;
  for (int i = 0; i < D; ++i) {
    if (count > limit / static_cast<std::size_t>(K)) throw SizeError("K^D exceeds enumeration bound");
    count *= static_cast<std::size_t>(K);
  }
  return count;
}

std::size_t encode_tuple(const std::vector<std::int64_t>& u, std::int64_t K) {
  std::size_t index = 0;
  for (std::int64_t x : u) {
    if (x < 1 || x > K) throw ContractError("tuple label out of range 1..K");
    index = index * static_cast<std::size_t>(K) + static_cast<std::size_t>(x - 1);
  }
  return index;
}

std::vector<std::int64_t> decode_tuple(std::size_t index, std::int64_t K, int D) {
  std::vector<std::int64_t> u(static_cast<std::size_t>(D));
  for (int i = D - 1; i >= 0; --i) {
    u[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(index % static_cast<std::size_t>(K)) + 1;
    index /= static_cast<std::size_t>(K);
  }
  return u;
}

// ------------------------------------------------------------ ScoredStrategy

double ScoredStrategy::score_at(double u) const {
  switch (score) {
    case Score::identity:
      return u;
    case Score::vee:
      return std::abs(u - 0.5);
    case Score::table:
      if (bins.empty()) throw ContractError("score table has no bins");
      return bins[static_cast<std::size_t>(bin_index(u, static_cast<int>(bins.size())))];
  }
  throw ContractError("unknown score kind");
}

// ----------------------------------------------------------------- mixtures

namespace {

void collect_shapes(const Strategy& s, std::vector<std::pair<std::int64_t, int>>& table_shapes,
                    std::vector<int>& scored_ds) {
  if (const auto* t = std::get_if<StrategyTable>(&s.v)) {
    table_shapes.emplace_back(t->K, t->D);
  } else if (const auto* sc = std::get_if<ScoredStrategy>(&s.v)) {
    scored_ds.push_back(sc->D);
  } else {
    const auto& mix = std::get<MixtureStrategy>(s.v);
    for (const Strategy& c : mix.components) collect_shapes(c, table_shapes, scored_ds);
  }
}

}  // namespace

MixtureStrategy mixture(std::vector<Strategy> components, std::vector<double> weights) {
  if (components.empty()) throw ContractError("mixture needs at least one component");
  if (components.size() != weights.size())
    throw ContractError("mixture component and weight counts differ");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ContractError("mixture weight must be finite and >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ContractError("mixture weights do not sum to 1");

  std::vector<std::pair<std::int64_t, int>> table_shapes;
  std::vector<int> scored_ds;
  MixtureStrategy mix{std::move(weights), std::move(components)};
  for (const Strategy& c : mix.components) collect_shapes(c, table_shapes, scored_ds);
  for (const auto& sh : table_shapes) {
    if (sh != table_shapes.front()) throw ContractError("mixture tables disagree on K or D");
  }
  for (int d : scored_ds) {
    if (d != scored_ds.front()) throw ContractError("mixture scored components disagree on D");
  }
  return mix;
}

// ------------------------------------------------------------------- choose

int choose(const StrategyTable& t, const std::vector<std::int64_t>& row, SplitMix64& rng) {
  check_label_row(row, t.K, t.D);
  const std::size_t index = encode_tuple(row, t.K);
  const double u = rng.next_double();
  double cum = 0.0;
  for (int i = 0; i < t.D; ++i) {
    cum += to_double(t.p(index, i));
    if (u < cum) return i + 1;
  }
  return t.D;
}

int choose(const ScoredStrategy& s, const std::vector<double>& row) {
  check_value_row(row, s.D);
  std::size_t best = 0;
  double best_score = s.score_at(row[0]);
  for (std::size_t i = 1; i < row.size(); ++i) {
    const double sc = s.score_at(row[i]);
    if (sc > best_score) {
      best = i;
      best_score = sc;
    }
  }
  return static_cast<int>(best) + 1;
}

int choose(const Strategy& s, const std::vector<double>& row, SplitMix64& rng) {
  if (const auto* t = std::get_if<StrategyTable>(&s.v)) {
    std::vector<std::int64_t> labels;
    labels.reserve(row.size());
    for (double v : row) {
      const double r = std::floor(v);
      if (!std::isfinite(v) || r != v) throw ContractError("table strategy requires integer labels");
      labels.push_back(static_cast<std::int64_t>(r));
    }
    return choose(*t, labels, rng);
  }
  if (const auto* sc = std::get_if<ScoredStrategy>(&s.v)) {
    return choose(*sc, row);
  }
  const auto& mix = std::get<MixtureStrategy>(s.v);
  const double u = rng.next_double();
  double cum = 0.0;
  std::size_t pick = mix.components.size() - 1;
  for (std::size_t c = 0; c < mix.weights.size(); ++c) {
    cum += mix.weights[c];
    if (u < cum) {
      pick = c;
      break;
    }
  }
  return choose(mix.components[pick], row, rng);
}

// ------------------------------------------------- chosen-value distribution

RationalPmf pmf_from_fractions(std::int64_t K, const std::vector<BigRational>& q) {
  BigInt den = 1;
  for (const BigRational& x : q) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(x));
  std::vector<BigInt> nums;
  nums.reserve(q.size());
  for (const BigRational& x : q) {
    nums.push_back(boost::multiprecision::numerator(x) *
                   (den / boost::multiprecision::denominator(x)));
  }
  return RationalPmf(K, std::move(nums), den).normalized();
}

RationalPmf sigma_discrete(const StrategyTable& t) {
  const std::size_t count = t.tuple_count();
  std::vector<BigRational> acc(static_cast<std::size_t>(t.K), BigRational(0));
  for (std::size_t ti = 0; ti < count; ++ti) {
    const std::vector<std::int64_t> u = decode_tuple(ti, t.K, t.D);
    for (int i = 0; i < t.D; ++i) {
      const BigRational& pi = t.p(ti, i);
      if (pi != 0) acc[static_cast<std::size_t>(u[static_cast<std::size_t>(i)] - 1)] += pi;
    }
  }
  const BigInt scale = ipow(t.K, t.D);
  for (BigRational& x : acc) x /= BigRational(scale);
  return pmf_from_fractions(t.K, acc);
}

RationalPmf sigma_discrete_of(const Strategy& s) {
  if (const auto* t = std::get_if<StrategyTable>(&s.v)) {
    return sigma_discrete(*t);
  }
  if (std::get_if<ScoredStrategy>(&s.v)) {
    throw ContractError("scored strategies have no exact discrete pmf");
  }
  const auto& mix = std::get<MixtureStrategy>(s.v);
  std::vector<RationalPmf> parts;
  parts.reserve(mix.components.size());
  for (const Strategy& c : mix.components) parts.push_back(sigma_discrete_of(c));
  const std::int64_t K = parts.front().K;
  for (const RationalPmf& p : parts) {
    if (p.K != K) throw ContractError("mixture components disagree on K");
  }
  BigRational wsum = 0;
  std::vector<BigRational> q(static_cast<std::size_t>(K), BigRational(0));
  for (std::size_t c = 0; c < parts.size(); ++c) {
    const BigRational w = rational_from_double(mix.weights[c]);
    wsum += w;
    for (std::int64_t k = 1; k <= K; ++k) {
      q[static_cast<std::size_t>(k - 1)] += w * parts[c].mass(k);
    }
  }
  if (wsum == 0) throw ContractError("mixture weights sum to 0");
  for (BigRational& x : q) x /= wsum;  // exact renormalization of the dyadic weights
  return pmf_from_fractions(K, q);
}

BinnedMeasure sigma_scored_mc(const ScoredStrategy& s, int D, std::int64_t N, int m,
                              std::uint64_t seed) {
  if (N < 1) throw ContractError("sample count must be >= 1");
  if (D < 1) throw ContractError("draw count must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(m), 0.0);
  std::vector<double> row(static_cast<std::size_t>(D));
  ScoredStrategy local = s;
  local.D = D;
  const double unit = 1.0 / static_cast<double>(N);
  for (std::int64_t trial = 0; trial < N; ++trial) {
    SplitMix64 rng(seed, static_cast<std::uint64_t>(trial));
    for (int j = 0; j < D; ++j) row[static_cast<std::size_t>(j)] = rng.next_double();
    const int idx = choose(local, row);
    w[static_cast<std::size_t>(bin_index(row[static_cast<std::size_t>(idx - 1)], m))] += unit;
  }
  return BinnedMeasure(m, std::move(w));
}

double sigma_max_cdf(double y, int D) {
  if (!(y >= 0.0 && y <= 1.0)) throw ContractError("cdf argument outside [0,1]");
  if (D < 1) throw ContractError("draw count must be >= 1");
  return std::pow(y, D);
}

// --------------------------------------------- consistency and relabelings

std::map<std::int64_t, BigRational> density_value_distribution(const StrategyTable& t,
                                                               const std::vector<std::int64_t>& u) {
  check_label_row(u, t.K, t.D);
  const std::size_t index = encode_tuple(u, t.K);
  std::map<std::int64_t, BigRational> dist;
  for (int i = 0; i < t.D; ++i) {
    const BigRational& pi = t.p(index, i);
    if (pi != 0) dist[u[static_cast<std::size_t>(i)]] += pi;
  }
  return dist;
}

bool is_consistent(const StrategyTable& t) {
  const std::size_t count = t.tuple_count();
  for (std::size_t ti = 0; ti < count; ++ti) {
    std::vector<std::int64_t> u = decode_tuple(ti, t.K, t.D);
    std::vector<std::int64_t> sorted = u;
    std::sort(sorted.begin(), sorted.end());
    if (sorted == u) continue;
    if (density_value_distribution(t, u) != density_value_distribution(t, sorted)) return false;
  }
  return true;
}

StrategyTable make_consistent(const StrategyTable& t) {
  const std::size_t count = t.tuple_count();
  const std::int64_t dfact = factorial_bounded(t.D);
  if (static_cast<std::size_t>(dfact) > kEnumLimit / std::max<std::size_t>(count, 1))
    throw SizeError("K^D * D! exceeds enumeration bound");

  std::vector<BigRational> out(t.entries.size(), BigRational(0));
  std::vector<std::size_t> perm(static_cast<std::size_t>(t.D));
  std::vector<std::int64_t> v(static_cast<std::size_t>(t.D));
  for (std::size_t ti = 0; ti < count; ++ti) {
    const std::vector<std::int64_t> u = decode_tuple(ti, t.K, t.D);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      // v is u read through perm; a choice of position j on v corresponds to
      // position perm[j] on u and keeps the same value.
      for (std::size_t j = 0; j < perm.size(); ++j) v[j] = u[perm[j]];
      const std::size_t vi = encode_tuple(v, t.K);
      for (int j = 0; j < t.D; ++j) {
        const BigRational& pj = t.p(vi, j);
        if (pj != 0) out[ti * static_cast<std::size_t>(t.D) + perm[static_cast<std::size_t>(j)]] += pj;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int j = 0; j < t.D; ++j) out[ti * static_cast<std::size_t>(t.D) + static_cast<std::size_t>(j)] /= dfact;
  }
  return StrategyTable(t.K, t.D, std::move(out));
}

StrategyTable scramble(const StrategyTable& t, const std::vector<std::int64_t>& phi) {
  if (phi.size() != static_cast<std::size_t>(t.K)) throw ContractError("phi length does not match K");
  std::vector<bool> seen(static_cast<std::size_t>(t.K), false);
  for (std::int64_t x : phi) {
    if (x < 1 || x > t.K || seen[static_cast<std::size_t>(x - 1)])
      throw ContractError("phi is not a bijection of {1..K}");
    seen[static_cast<std::size_t>(x - 1)] = true;
  }
  const std::size_t count = t.tuple_count();
  std::vector<BigRational> out(t.entries.size());
  std::vector<std::int64_t> w(static_cast<std::size_t>(t.D));
  for (std::size_t ti = 0; ti < count; ++ti) {
    const std::vector<std::int64_t> u = decode_tuple(ti, t.K, t.D);
    for (int j = 0; j < t.D; ++j) w[static_cast<std::size_t>(j)] = phi[static_cast<std::size_t>(u[static_cast<std::size_t>(j)] - 1)];
    const std::size_t wi = encode_tuple(w, t.K);
    for (int j = 0; j < t.D; ++j)
      out[ti * static_cast<std::size_t>(t.D) + static_cast<std::size_t>(j)] = t.p(wi, j);
  }
  return StrategyTable(t.K, t.D, std::move(out));
}

// ------------------------------------------------ density value distribution

double EmpiricalCdf::cdf(double t) const {
  const auto it = std::upper_bound(values.begin(), values.end(), t);
  return static_cast<double>(it - values.begin()) / static_cast<double>(values.size());
}

EmpiricalCdf density_cdf_mc(const ScoredStrategy& s, int D, std::int64_t N, int m,
                            std::uint64_t seed) {
  if (N < 10'000) throw ContractError("density estimation needs N >= 10^4");
  const BinnedMeasure est = sigma_scored_mc(s, D, N, m, seed);
  EmpiricalCdf out;
  out.values.reserve(static_cast<std::size_t>(m));
  for (double wb : est.weights) out.values.push_back(wb * static_cast<double>(m));
  std::sort(out.values.begin(), out.values.end());
  return out;
}

}  // namespace gridlab
