// Measures on [0,1]: representations, Levy-Prokhorov distance (coupling
// algorithm and subset-enumeration oracle), total variation, KL, binning.

#include "gridlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <queue>

namespace gridlab {

namespace {

constexpr std::size_t kMaxAtoms = 10000;         // distance-computation cap (quadratic cost)
constexpr std::size_t kMaxStoredAtoms = 10'000'000;  // construction cap (linear cost)
constexpr double kMassTol = 1e-12;               // equal-total tolerance
constexpr double kFlowResidualFloor = 1e-15;     // treat smaller residuals as saturated

void check_finite_unit(double v, const char* what) {
  if (!std::isfinite(v)) throw ContractError(std::string(what) + " is not finite");
  if (v < 0.0 || v > 1.0) throw ContractError(std::string(what) + " outside [0,1]");
}

// Maximum mass transportable between the two atom lists using only pairs
// with |x_i - y_j| <= eps, via augmenting paths on the bipartite transport
// graph (source -> left atoms -> allowed pairs -> right atoms -> sink).
// Pair capacities are unbounded, so every augmenting path saturates a
// source- or sink-side edge and the search terminates quickly at these sizes.
class TransportFlow {
 public:
  TransportFlow(const AtomicMeasure& mu, const AtomicMeasure& nu)
      : mu_(mu), nu_(nu), L_(mu.size()), R_(nu.size()),
        flow_(L_ * R_, 0.0), used_a_(L_, 0.0), used_b_(R_, 0.0),
        parent_(2 + L_ + R_) {}

  // Recomputes the maximum transportable mass from scratch at threshold eps.
  double max_mass(double eps) {
    std::fill(flow_.begin(), flow_.end(), 0.0);
    std::fill(used_a_.begin(), used_a_.end(), 0.0);
    std::fill(used_b_.begin(), used_b_.end(), 0.0);
    while (augment(eps)) {
    }
    return std::accumulate(used_a_.begin(), used_a_.end(), 0.0);
  }

 private:
  // Node ids: 0 source, 1..L left, L+1..L+R right, L+R+1 sink.
  std::size_t left_id(std::size_t i) const { return 1 + i; }
  std::size_t right_id(std::size_t j) const { return 1 + L_ + j; }
  std::size_t sink_id() const { return 1 + L_ + R_; }

  bool allowed(std::size_t i, std::size_t j, double eps) const {
    return std::abs(mu_.values[i] - nu_.values[j]) <= eps;
  }

  bool augment(double eps) {
    std::fill(parent_.begin(), parent_.end(), kUnvisited);
    std::queue<std::size_t> q;
    parent_[0] = 0;
    q.push(0);
    while (!q.empty() && parent_[sink_id()] == kUnvisited) {
      const std::size_t u = q.front();
      q.pop();
      if (u == 0) {
        for (std::size_t i = 0; i < L_; ++i) {
          if (parent_[left_id(i)] == kUnvisited &&
              mu_.masses[i] - used_a_[i] > kFlowResidualFloor) {
            parent_[left_id(i)] = 0;
            q.push(left_id(i));
          }
        }
      } else if (u >= 1 && u <= L_) {
        const std::size_t i = u - 1;
        for (std::size_t j = 0; j < R_; ++j) {
          if (parent_[right_id(j)] == kUnvisited && allowed(i, j, eps)) {
            parent_[right_id(j)] = u;
            q.push(right_id(j));
          }
        }
      } else if (u != sink_id()) {
        const std::size_t j = u - 1 - L_;
        if (nu_.masses[j] - used_b_[j] > kFlowResidualFloor &&
            parent_[sink_id()] == kUnvisited) {
          parent_[sink_id()] = u;
        }
        for (std::size_t i = 0; i < L_; ++i) {
          if (parent_[left_id(i)] == kUnvisited && flow_[i * R_ + j] > kFlowResidualFloor) {
            parent_[left_id(i)] = u;
            q.push(left_id(i));
          }
        }
      }
    }
    if (parent_[sink_id()] == kUnvisited) return false;

    // Bottleneck along the path (pair edges are unbounded).
    double amount = std::numeric_limits<double>::infinity();
    for (std::size_t v = sink_id(); v != 0;) {
      const std::size_t p = parent_[v];
      if (p == 0) {
        amount = std::min(amount, mu_.masses[v - 1] - used_a_[v - 1]);
      } else if (v == sink_id()) {
        amount = std::min(amount, nu_.masses[p - 1 - L_] - used_b_[p - 1 - L_]);
      } else if (v >= 1 && v <= L_) {
        // right -> left residual edge: undo previously routed flow
        amount = std::min(amount, flow_[(v - 1) * R_ + (p - 1 - L_)]);
      }
      v = p;
    }
    for (std::size_t v = sink_id(); v != 0;) {
      const std::size_t p = parent_[v];
      if (p == 0) {
        used_a_[v - 1] += amount;
      } else if (v == sink_id()) {
        used_b_[p - 1 - L_] += amount;
      } else if (v >= 1 && v <= L_) {
        flow_[(v - 1) * R_ + (p - 1 - L_)] -= amount;
      } else {
        flow_[(p - 1) * R_ + (v - 1 - L_)] += amount;
      }
      v = p;
    }
    return true;
  }

  static constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);

  const AtomicMeasure& mu_;
  const AtomicMeasure& nu_;
  std::size_t L_, R_;
  std::vector<double> flow_;
  std::vector<double> used_a_, used_b_;
  std::vector<std::size_t> parent_;
};

// Sorted, deduplicated pairwise distances with 0 prepended: the candidate
// thresholds at which transportable mass can change.
std::vector<double> candidate_distances(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  std::vector<double> d;
  d.reserve(mu.size() * nu.size() + 1);
  d.push_back(0.0);
  for (double x : mu.values)
    for (double y : nu.values) d.push_back(std::abs(x - y));
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

}  // namespace

// ------------------------------------------------------------ BinnedMeasure

BinnedMeasure::BinnedMeasure(int m_, std::vector<double> w) : m(m_), weights(std::move(w)) {
  if (m < 1) throw ContractError("bin count must be >= 1");
  if (weights.size() != static_cast<std::size_t>(m))
    throw ContractError("weight vector length does not match bin count");
  for (double x : weights) {
    if (!std::isfinite(x)) throw ContractError("bin weight is not finite");
    if (x < 0.0) throw ContractError("bin weight is negative");
  }
}

double BinnedMeasure::total() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

bool BinnedMeasure::is_probability(double tol) const {
  return std::abs(total() - 1.0) <= tol;
}

BinnedMeasure BinnedMeasure::uniform(int m) {
  if (m < 1) throw ContractError("bin count must be >= 1");
  return BinnedMeasure(m, std::vector<double>(m, 1.0 / m));
}

// ------------------------------------------------------------ AtomicMeasure

AtomicMeasure AtomicMeasure::from_atoms(std::vector<std::pair<double, double>> atoms) {
  if (atoms.size() > kMaxStoredAtoms) throw SizeError("too many atoms");
  std::sort(atoms.begin(), atoms.end());
  AtomicMeasure out;
  for (const auto& [v, w] : atoms) {
    check_finite_unit(v, "atom value");
    if (!std::isfinite(w) || w < 0.0) throw ContractError("atom mass must be finite and >= 0");
    if (!out.values.empty() && out.values.back() == v) {
      out.masses.back() += w;
    } else {
      out.values.push_back(v);
      out.masses.push_back(w);
    }
  }
  return out;
}

double AtomicMeasure::total() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

// --------------------------------------------------------------- RationalPmf

RationalPmf::RationalPmf(std::int64_t K_, std::vector<BigInt> nums, BigInt den)
    : K(K_), numerators(std::move(nums)), denominator(std::move(den)) {
  if (K < 1) throw ContractError("label count must be >= 1");
  if (numerators.size() != static_cast<std::size_t>(K))
    throw ContractError("numerator vector length does not match label count");
  if (denominator <= 0) throw ContractError("denominator must be positive");
  BigInt sum = 0;
  for (const BigInt& n : numerators) {
    if (n < 0) throw ContractError("pmf numerator is negative");
    sum += n;
  }
  if (sum != denominator)
    throw ContractError("pmf does not sum to exactly 1");
}

RationalPmf RationalPmf::normalized() const {
  BigInt g = denominator;
  for (const BigInt& n : numerators) g = boost::multiprecision::gcd(g, n);
  std::vector<BigInt> nums;
  nums.reserve(numerators.size());
  for (const BigInt& n : numerators) nums.push_back(n / g);
  return RationalPmf(K, std::move(nums), denominator / g);
}

bool RationalPmf::operator==(const RationalPmf& o) const {
  if (K != o.K) return false;
  for (std::int64_t k = 0; k < K; ++k) {
    if (numerators[k] * o.denominator != o.numerators[k] * denominator) return false;
  }
  return true;
}

BigRational RationalPmf::mass(std::int64_t label) const {
  if (label < 1 || label > K) throw ContractError("label out of range");
  return BigRational(numerators[label - 1], denominator);
}

BigRational RationalPmf::mean() const {
  BigInt acc = 0;
  for (std::int64_t k = 1; k <= K; ++k) acc += k * numerators[k - 1];
  return BigRational(acc, denominator);
}

std::vector<double> RationalPmf::to_doubles() const {
  std::vector<double> out;
  out.reserve(numerators.size());
  for (const BigInt& n : numerators) out.push_back(to_double(BigRational(n, denominator)));
  return out;
}

AtomicMeasure RationalPmf::embed_atoms() const {
  std::vector<std::pair<double, double>> atoms;
  for (std::int64_t k = 1; k <= K; ++k) {
    const double v = (2.0 * static_cast<double>(k) - 1.0) / (2.0 * static_cast<double>(K));
    const double w = to_double(mass(k));
    if (w > 0.0) atoms.emplace_back(v, w);
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

// ---------------------------------------------------------------- lp_distance

double lp_distance(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (mu.size() + nu.size() > kMaxAtoms) throw SizeError("too many atoms");
  const double ta = mu.total();
  const double tb = nu.total();
  if (std::abs(ta - tb) > kMassTol)
    throw ContractError("total masses differ");
  const double total = 0.5 * (ta + tb);
  if (mu.size() == 0 || nu.size() == 0 || total <= kMassTol) {
    // One side is (numerically) null: all its mass is deficit.
    return total;
  }

  const std::vector<double> d = candidate_distances(mu, nu);
  TransportFlow flow(mu, nu);
  const auto deficit = [&](std::size_t k) { return total - flow.max_mass(d[k]); };

  // d[k] increases, the deficit total - M(d[k]) does not increase, so the
  // predicate d[k] >= deficit(k) is monotone; the minimum of
  // max(d[k], deficit(k)) sits at the crossing.
  std::size_t lo = 0, hi = d.size() - 1;
  if (d[lo] < deficit(lo)) {
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (d[mid] >= deficit(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  } else {
    hi = lo;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k : {lo, hi}) {
    best = std::min(best, std::max(d[k], deficit(k)));
  }
  return std::clamp(best, 0.0, total);
}

double lp_distance_oracle(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (mu.size() + nu.size() > 14) throw SizeError("oracle supports at most 14 atoms combined");
  const std::vector<double> thresholds = candidate_distances(mu, nu);

  // Largest over subsets A of the least eps making mass(A) <= other(A^eps) + eps.
  const auto one_direction = [&](const AtomicMeasure& a, const AtomicMeasure& b) {
    const std::size_t L = a.size();
    const std::size_t R = b.size();
    double worst = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << L); ++mask) {
      double mass_a = 0.0;
      std::vector<double> dist_b(R, std::numeric_limits<double>::infinity());
      for (std::size_t i = 0; i < L; ++i) {
        if (!(mask & (std::size_t{1} << i))) continue;
        mass_a += a.masses[i];
        for (std::size_t j = 0; j < R; ++j) {
          dist_b[j] = std::min(dist_b[j], std::abs(b.values[j] - a.values[i]));
        }
      }
      double eps_a = std::numeric_limits<double>::infinity();
      for (double t : thresholds) {
        double fattened = 0.0;
        for (std::size_t j = 0; j < R; ++j) {
          if (dist_b[j] <= t) fattened += b.masses[j];
        }
        eps_a = std::min(eps_a, std::max(t, mass_a - fattened));
      }
      worst = std::max(worst, eps_a);
    }
    return worst;
  };

  return std::max(0.0, std::max(one_direction(mu, nu), one_direction(nu, mu)));
}

// ------------------------------------------------------- tv / kl / binning

double total_variation(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  double acc = 0.0;
  std::size_t i = 0, j = 0;
  while (i < mu.size() || j < nu.size()) {
    if (j == nu.size() || (i < mu.size() && mu.values[i] < nu.values[j])) {
      acc += mu.masses[i++];
    } else if (i == mu.size() || nu.values[j] < mu.values[i]) {
      acc += nu.masses[j++];
    } else {
      acc += std::abs(mu.masses[i++] - nu.masses[j++]);
    }
  }
  return 0.5 * acc;
}

double total_variation(const BinnedMeasure& mu, const BinnedMeasure& nu) {
  if (mu.m != nu.m) throw ContractError("bin resolutions differ");
  double acc = 0.0;
  for (int b = 0; b < mu.m; ++b) acc += std::abs(mu.weights[b] - nu.weights[b]);
  return 0.5 * acc;
}

double kl_divergence(const BinnedMeasure& nu, const BinnedMeasure& base) {
  if (nu.m != base.m) throw ContractError("bin resolutions differ");
  double acc = 0.0;
  for (int b = 0; b < nu.m; ++b) {
    const double p = nu.weights[b];
    if (p == 0.0) continue;
    const double q = base.weights[b];
    if (q == 0.0) return std::numeric_limits<double>::infinity();
    acc += p * std::log(p / q);
  }
  return acc;
}

int bin_index(double value, int m) {
  if (m < 1) throw ContractError("bin count must be >= 1");
  check_finite_unit(value, "value");
  const int b = static_cast<int>(value * m);
  return std::min(b, m - 1);
}

BinnedMeasure bin(const AtomicMeasure& mu, int m) {
  std::vector<double> w(static_cast<std::size_t>(m), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    w[static_cast<std::size_t>(bin_index(mu.values[i], m))] += mu.masses[i];
  }
  return BinnedMeasure(m, std::move(w));
}

AtomicMeasure center_atoms(const BinnedMeasure& mu) {
  std::vector<std::pair<double, double>> atoms;
  for (int b = 0; b < mu.m; ++b) {
    if (mu.weights[b] > 0.0) {
      atoms.emplace_back((2.0 * b + 1.0) / (2.0 * mu.m), mu.weights[b]);
    }
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

BinnedMeasure binned_sigma_max(int m, int D) {
  if (m < 1) throw ContractError("bin count must be >= 1");
  if (D < 1) throw ContractError("draw count must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(m));
  for (int b = 0; b < m; ++b) {
    const double hi = static_cast<double>(b + 1) / m;
    const double lo = static_cast<double>(b) / m;
    w[static_cast<std::size_t>(b)] = std::pow(hi, D) - std::pow(lo, D);
  }
  return BinnedMeasure(m, std::move(w));
}

BinnedMeasure mix_binned(const BinnedMeasure& a, const BinnedMeasure& b, double t) {
  if (a.m != b.m) throw ContractError("bin resolutions differ");
  if (!(t >= 0.0 && t <= 1.0)) throw ContractError("mixture weight outside [0,1]");
  std::vector<double> w(static_cast<std::size_t>(a.m));
  for (int i = 0; i < a.m; ++i) w[static_cast<std::size_t>(i)] = (1.0 - t) * a.weights[i] + t * b.weights[i];
  return BinnedMeasure(a.m, std::move(w));
}

}  // namespace gridlab
