// Gibbs free energy and the dual grid-entropy optimizer.

#include "gridlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>

#include "gridlab/rng.hpp"

namespace gridlab {

namespace {

constexpr std::size_t kMultisetLimit = 10'000'000;

void check_tau_nu(const TauFunction& tau, const BinnedMeasure& nu) {
  if (tau.m != nu.m) throw ContractError("bin resolutions differ");
  if (!nu.is_probability()) throw ContractError("target measure is not a probability");
}

// Number of bin multisets C(m+D-1, D), guarded against the enumeration bound.
std::size_t multiset_count(int m, int D) {
  BigInt c = 1;
  for (int i = 1; i <= D; ++i) {
    c = c * (m - 1 + i) / i;  // exact: product of i consecutive integers divides by i!
    if (c > kMultisetLimit) throw SizeError("bin multiset count exceeds enumeration bound");
  }
  return static_cast<std::size_t>(c);
}

// Visits every multiset of D bins as (distinct bins, their counts) with its
// probability weight multinomial(D; counts) / m^D.
template <typename Visitor>
void for_each_multiset(int m, int D, const Visitor& visit) {
  multiset_count(m, D);
  std::vector<double> fact(static_cast<std::size_t>(D) + 1, 1.0);
  for (int i = 1; i <= D; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;
  const double inv_md = std::pow(static_cast<double>(m), -D);

  std::vector<int> bins;
  std::vector<int> counts;
  const std::function<void(int, int, double)> rec = [&](int next_bin, int left, double denom) {
    if (left == 0) {
      visit(bins, counts, fact[static_cast<std::size_t>(D)] / denom * inv_md);
      return;
    }
    if (next_bin == m) return;
    // Remaining bins all beyond next_bin: next_bin takes 0..left copies.
    rec(next_bin + 1, left, denom);
    bins.push_back(next_bin);
    counts.push_back(0);
    for (int c = 1; c <= left; ++c) {
      counts.back() = c;
      rec(next_bin + 1, left - c, denom * fact[static_cast<std::size_t>(c)]);
    }
    bins.pop_back();
    counts.pop_back();
  };
  rec(0, D, 1.0);
}

}  // namespace

TauFunction::TauFunction(int m_, double beta_, std::vector<double> v)
    : m(m_), beta(beta_), values(std::move(v)) {
  if (m < 1) throw ContractError("bin count must be >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ContractError("beta must be positive and finite");
  if (values.size() != static_cast<std::size_t>(m))
    throw ContractError("potential length does not match bin count");
  for (double x : values) {
    if (!std::isfinite(x)) throw ContractError("potential value is not finite");
  }
}

double gibbs_exact(const TauFunction& tau, int D) {
  if (D < 1) throw ContractError("draw count must be >= 1");
  double g = 0.0;
  for_each_multiset(tau.m, D, [&](const std::vector<int>& bins, const std::vector<int>& counts,
                                  double weight) {
    // log sum_j exp(beta tau(b_j)) over the D slots, stabilized by the max.
    double peak = -std::numeric_limits<double>::infinity();
    for (int b : bins) peak = std::max(peak, tau.beta * tau.values[static_cast<std::size_t>(b)]);
    double s = 0.0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      s += counts[i] * std::exp(tau.beta * tau.values[static_cast<std::size_t>(bins[i])] - peak);
    }
    g += weight * (peak + std::log(s));
  });
  return g;
}

std::pair<double, double> gibbs_mc(const TauFunction& tau, int D, std::int64_t N,
                                   std::uint64_t seed) {
  if (D < 1) throw ContractError("draw count must be >= 1");
  if (N < 100) throw ContractError("Monte Carlo needs N >= 100");
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::int64_t trial = 0; trial < N; ++trial) {
    SplitMix64 rng(seed, static_cast<std::uint64_t>(trial));
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> vals(static_cast<std::size_t>(D));
    for (int j = 0; j < D; ++j) {
      const int b = bin_index(rng.next_double(), tau.m);
      vals[static_cast<std::size_t>(j)] = tau.beta * tau.values[static_cast<std::size_t>(b)];
      peak = std::max(peak, vals[static_cast<std::size_t>(j)]);
    }
    double s = 0.0;
    for (double v : vals) s += std::exp(v - peak);
    const double x = peak + std::log(s);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / static_cast<double>(N);
  const double var = std::max(0.0, sumsq / static_cast<double>(N) - mean * mean);
  const double stderr_ = std::sqrt(var / static_cast<double>(N));
  return {mean, stderr_};
}

double dual_objective(const TauFunction& tau, const BinnedMeasure& nu, int D) {
  check_tau_nu(tau, nu);
  double inner = 0.0;
  for (int b = 0; b < tau.m; ++b) inner += tau.values[static_cast<std::size_t>(b)] * nu.weights[static_cast<std::size_t>(b)];
  return tau.beta * inner - gibbs_exact(tau, D);
}

std::vector<double> dual_gradient(const TauFunction& tau, const BinnedMeasure& nu, int D) {
  check_tau_nu(tau, nu);
  std::vector<double> g(static_cast<std::size_t>(tau.m), 0.0);
  for_each_multiset(tau.m, D, [&](const std::vector<int>& bins, const std::vector<int>& counts,
                                  double weight) {
    double peak = -std::numeric_limits<double>::infinity();
    for (int b : bins) peak = std::max(peak, tau.beta * tau.values[static_cast<std::size_t>(b)]);
    double s = 0.0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      s += counts[i] * std::exp(tau.beta * tau.values[static_cast<std::size_t>(bins[i])] - peak);
    }
    for (std::size_t i = 0; i < bins.size(); ++i) {
      const double share =
          counts[i] * std::exp(tau.beta * tau.values[static_cast<std::size_t>(bins[i])] - peak) / s;
      g[static_cast<std::size_t>(bins[i])] -= tau.beta * weight * share;
    }
  });
  for (int b = 0; b < tau.m; ++b) g[static_cast<std::size_t>(b)] += tau.beta * nu.weights[static_cast<std::size_t>(b)];
  return g;
}

DualReport grid_entropy_dual(const BinnedMeasure& nu, int D, double beta,
                             const DualOptions& opts) {
  if (!nu.is_probability()) throw ContractError("target measure is not a probability");
  TauFunction tau(nu.m, beta, std::vector<double>(static_cast<std::size_t>(nu.m), 0.0));

  const auto recenter = [&](std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v) x -= mean;
  };

  DualReport report;
  double f = dual_objective(tau, nu, D);
  report.objective_trace.push_back(f);
  double step = opts.initial_step;

  std::int64_t it = 0;
  for (; it < opts.max_iter; ++it) {
    const std::vector<double> g = dual_gradient(tau, nu, D);
    double gnorm2 = 0.0;
    for (double x : g) gnorm2 += x * x;
    report.grad_norm = std::sqrt(gnorm2);
    if (report.grad_norm <= opts.tol) {
      report.converged = true;
      break;
    }

    // Armijo backtracking along the gradient; the accepted step seeds the
    // next iteration (doubled) so steps adapt in both directions.
    constexpr double kArmijoC1 = 1e-4;
    TauFunction trial = tau;
    bool accepted = false;
    while (step > 1e-18) {
      trial.values = tau.values;
      for (int b = 0; b < tau.m; ++b) trial.values[static_cast<std::size_t>(b)] += step * g[static_cast<std::size_t>(b)];
      recenter(trial.values);
      const double ft = dual_objective(trial, nu, D);
      if (ft >= f + kArmijoC1 * step * gnorm2) {
        tau = trial;
        f = ft;
        report.objective_trace.push_back(f);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow: no further progress possible
    // Cap the growth: when the objective is unbounded above (target outside
    // the achievable set) the doubled step would overflow to infinity and the
    // halving loop above could no longer reduce it.
    step = std::min(step * 2.0, 1e12);
  }

  report.iterations = it;
  report.entropy_estimate = -f;
  report.tau_star = tau;
  return report;
}

std::vector<ConcavityRow> entropy_concavity_probe(const BinnedMeasure& nu1,
                                                  const BinnedMeasure& nu2,
                                                  const std::vector<double>& t_list, int D,
                                                  double beta, const DualOptions& opts) {
  if (nu1.m != nu2.m) throw ContractError("bin resolutions differ");
  const double e1 = grid_entropy_dual(nu1, D, beta, opts).entropy_estimate;
  const double e2 = grid_entropy_dual(nu2, D, beta, opts).entropy_estimate;

  std::vector<ConcavityRow> rows;
  rows.reserve(t_list.size());
  for (double t : t_list) {
    const BinnedMeasure mixed = mix_binned(nu2, nu1, t);  // t*nu1 + (1-t)*nu2
    ConcavityRow row;
    row.t = t;
    row.estimate = grid_entropy_dual(mixed, D, beta, opts).entropy_estimate;
    row.endpoint_mix = t * e1 + (1.0 - t) * e2;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gridlab
