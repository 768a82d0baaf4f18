// Gibbs free energy of binned potentials (exact enumeration and Monte
// Carlo) and the grid-entropy estimate via the convex-dual variational
// formula, maximized by gradient ascent.
//
// The free energy of a potential tau on m bins at inverse temperature beta
// is E[log sum_j exp(beta * tau(bin(U_j)))] over D iid uniforms; the dual
// objective for a target measure nu is beta<tau, nu> - G(tau), whose
// supremum over tau equals minus the entropy. Binned tau under-approximates
// that supremum, so the reported estimate upper-bounds the true entropy.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gridlab/measures.hpp"

namespace gridlab {

struct TauFunction {
  int m = 1;
  double beta = 1.0;
  std::vector<double> values;  // one potential value per bin

  TauFunction() : values(1, 0.0) {}
  TauFunction(int m_, double beta_, std::vector<double> v);
};

struct DualOptions {
  std::int64_t max_iter = 10'000;
  double tol = 1e-8;          // stop when gradient L2 norm falls below
  double initial_step = 1.0;  // first Armijo trial step
};

struct DualReport {
  double entropy_estimate = 0.0;  // -(best objective)
  TauFunction tau_star;
  std::int64_t iterations = 0;
  double grad_norm = 0.0;
  std::vector<double> objective_trace;  // accepted objective values
  bool converged = false;               // grad_norm <= tol reached
};

// Exact free energy by enumerating bin multisets with multinomial weights
// (C(m+D-1, D) states instead of m^D tuples), stable log-sum-exp inside.
double gibbs_exact(const TauFunction& tau, int D);

// Sample mean and standard error of log sum_j exp(beta tau(U_j)) over N
// independent trials.
std::pair<double, double> gibbs_mc(const TauFunction& tau, int D, std::int64_t N,
                                   std::uint64_t seed);

// beta <tau, nu> - gibbs_exact(tau, D); invariant under tau -> tau + c.
double dual_objective(const TauFunction& tau, const BinnedMeasure& nu, int D);

// Exact gradient of the dual objective; components sum to zero.
std::vector<double> dual_gradient(const TauFunction& tau, const BinnedMeasure& nu, int D);

// Gradient ascent from tau = 0 with Armijo backtracking, re-centering tau to
// mean zero each step (the shift direction is null). Non-convergence is
// reported, not thrown.
DualReport grid_entropy_dual(const BinnedMeasure& nu, int D, double beta = 1.0,
                             const DualOptions& opts = {});

struct ConcavityRow {
  double t = 0.0;
  double estimate = 0.0;      // entropy estimate at t*nu1 + (1-t)*nu2
  double endpoint_mix = 0.0;  // t*estimate(nu1) + (1-t)*estimate(nu2)
};

// Entropy estimates along the segment between two measures; the estimator is
// concave, so estimate >= endpoint_mix up to optimizer tolerance.
std::vector<ConcavityRow> entropy_concavity_probe(const BinnedMeasure& nu1,
                                                  const BinnedMeasure& nu2,
                                                  const std::vector<double>& t_list, int D,
                                                  double beta = 1.0, const DualOptions& opts = {});

}  // namespace gridlab
