// gridlab: command-line front end.
//
// Subcommands: simulate | dual | gibbs | paths | discrete | lp. Every output
// document embeds {version, config, seed}, so a run can be reproduced from
// its own output. JSON is the default format; --format csv emits curve data
// as comment-prefixed CSV. Exit codes: 0 success, 1 contract/size/io error,
// 2 usage error.

#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "gridlab/entropy.hpp"
#include "gridlab/errors.hpp"
#include "gridlab/io.hpp"
#include "gridlab/measures.hpp"
#include "gridlab/paths.hpp"
#include "gridlab/permutohedron.hpp"
#include "gridlab/simulate.hpp"
#include "gridlab/strategies.hpp"
#include "gridlab/version.hpp"

namespace {

using namespace gridlab;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  int workers = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed (default from GRIDLAB_SEED, else 0)")
      ->envname("GRIDLAB_SEED");
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--workers", c.workers, "worker threads for simulation")
      ->check(CLI::PositiveNumber);
}

// Compact scalar rendering for CSV comment lines.
std::string compact(const JsonValue& v) {
  struct R {
    std::string operator()(std::nullptr_t) const { return "null"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const JsonArray& a) const {
      std::string out;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i > 0) out.push_back(';');
        out += compact(a[i]);
      }
      return out;
    }
    std::string operator()(const JsonObject&) const { return "<object>"; }
  };
  return std::visit(R{}, v.v);
}

// JSON: {version, config, seed, ...payload}. CSV: '#' comment lines carrying
// the same version/config/seed, then the table.
void emit(const Common& c, const JsonObject& config, JsonObject payload,
          const std::vector<std::string>& csv_header,
          const std::vector<std::vector<std::string>>& csv_rows) {
  std::string text;
  if (c.format == "json") {
    JsonObject doc{{"version", GRIDLAB_VERSION},
                   {"config", JsonValue(config)},
                   {"seed", std::to_string(c.seed)}};
    for (auto& kv : payload) doc.emplace_back(std::move(kv));
    text = dump_json(JsonValue(std::move(doc)));
  } else {
    text += "# version=" GRIDLAB_VERSION "\n";
    for (const auto& [key, value] : config) text += "# " + key + "=" + compact(value) + "\n";
    text += "# seed=" + std::to_string(c.seed) + "\n";
    text += csv_table(csv_header, csv_rows);
  }
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_file(c.out, text);
  }
}

// --nu: builtin name or measure file, resolved to a binned measure.
BinnedMeasure resolve_nu(const std::string& spec, int m, int D) {
  if (spec == "uniform") return BinnedMeasure::uniform(m);
  if (spec == "sigma_max") return binned_sigma_max(m, D);
  const MeasureVariant v = parse_measure_json(read_file(spec));
  if (const auto* b = std::get_if<BinnedMeasure>(&v)) {
    if (b->m != m)
      throw ContractError("measure file has " + std::to_string(b->m) + " bins, --m says " +
                          std::to_string(m));
    return *b;
  }
  if (const auto* a = std::get_if<AtomicMeasure>(&v)) return bin(*a, m);
  return bin(std::get<RationalPmf>(v).embed_atoms(), m);
}

// --strategy: builtin name or strategy file. Builtins: max, vee (scored,
// continuous); greedy, uniform (tables over 1..K).
Strategy resolve_strategy(const std::string& spec, int D, std::int64_t K) {
  if (spec == "max") return Strategy{ScoredStrategy{ScoredStrategy::Score::identity, {}, D}};
  if (spec == "vee") return Strategy{ScoredStrategy{ScoredStrategy::Score::vee, {}, D}};
  if (spec == "greedy" || spec == "uniform") {
    if (K < 1) throw ContractError("builtin strategy \"" + spec + "\" needs --K");
    return spec == "greedy" ? Strategy{StrategyTable::greedy_max(K, D)}
                            : Strategy{StrategyTable::uniform(K, D)};
  }
  return parse_strategy_json(read_file(spec));
}

AtomicMeasure atoms_of(const MeasureVariant& v) {
  if (const auto* b = std::get_if<BinnedMeasure>(&v)) return center_atoms(*b);
  if (const auto* a = std::get_if<AtomicMeasure>(&v)) return *a;
  return std::get<RationalPmf>(v).embed_atoms();
}

std::string fraction(const BigInt& num, const BigInt& den) {
  return to_string(num) + "/" + to_string(den);
}

// ----------------------------------------------------------- subcommands

int run_simulate(const Common& c, const std::string& strategy_spec, int D, std::int64_t K,
                 const std::vector<std::int64_t>& n_list, int m) {
  const Strategy strategy = resolve_strategy(strategy_spec, D, K);
  const auto rows = glivenko_check(strategy, n_list, m, c.seed, c.workers);

  JsonObject config{{"subcommand", "simulate"}, {"strategy", strategy_spec},
                    {"D", std::int64_t{D}},    {"K", K},
                    {"m", std::int64_t{m}},    {"workers", std::int64_t{c.workers}},
                    {"format", c.format}};
  JsonArray jrows;
  std::vector<std::vector<std::string>> crows;
  for (const auto& [n, rho] : rows) {
    jrows.emplace_back(JsonObject{{"n", n}, {"rho", rho}});
    crows.push_back({std::to_string(n), format_double(rho)});
  }
  emit(c, config, {{"rows", JsonValue(std::move(jrows))}}, {"n", "rho"}, crows);
  return 0;
}

int run_dual(const Common& c, const std::string& nu_spec, const std::vector<int>& m_list, int D,
             double beta) {
  JsonObject config{{"subcommand", "dual"},
                    {"nu", nu_spec},
                    {"D", std::int64_t{D}},
                    {"beta", beta},
                    {"format", c.format}};
  JsonArray jm;
  for (int m : m_list) jm.emplace_back(std::int64_t{m});
  config.emplace_back("m", JsonValue(std::move(jm)));

  JsonArray jrows;
  std::vector<std::vector<std::string>> crows;
  for (int m : m_list) {
    const BinnedMeasure nu = resolve_nu(nu_spec, m, D);
    const DualReport r = grid_entropy_dual(nu, D, beta);
    JsonArray tau;
    for (double t : r.tau_star.values) tau.emplace_back(t);
    jrows.emplace_back(JsonObject{{"m", std::int64_t{m}},
                                  {"entropy_estimate", r.entropy_estimate},
                                  {"converged", r.converged},
                                  {"iterations", r.iterations},
                                  {"grad_norm", r.grad_norm},
                                  {"tau_star", JsonValue(std::move(tau))}});
    crows.push_back({std::to_string(m), format_double(r.entropy_estimate),
                     r.converged ? "true" : "false", std::to_string(r.iterations),
                     format_double(r.grad_norm)});
  }
  emit(c, config, {{"rows", JsonValue(std::move(jrows))}},
       {"m", "entropy_estimate", "converged", "iterations", "grad_norm"}, crows);
  return 0;
}

int run_gibbs(const Common& c, const std::string& tau_spec, int D, int m, bool beta_set,
              double beta, std::int64_t mc_samples) {
  TauFunction tau;
  if (tau_spec == "zero") {
    if (m < 1) throw ContractError("builtin potential \"zero\" needs --m");
    tau = TauFunction(m, beta_set ? beta : 1.0, std::vector<double>(static_cast<std::size_t>(m), 0.0));
  } else {
    tau = parse_tau_json(read_file(tau_spec));
    if (beta_set) tau = TauFunction(tau.m, beta, tau.values);
  }

  const double exact = gibbs_exact(tau, D);
  JsonObject config{{"subcommand", "gibbs"},  {"tau", tau_spec},
                    {"D", std::int64_t{D}},   {"m", std::int64_t{tau.m}},
                    {"beta", tau.beta},       {"n", mc_samples},
                    {"format", c.format}};
  JsonObject payload{{"exact", exact}};
  std::vector<std::string> row{format_double(exact), "", ""};
  if (mc_samples > 0) {
    const auto [mean, stderr_] = gibbs_mc(tau, D, mc_samples, c.seed);
    payload.emplace_back(
        "mc", JsonValue(JsonObject{{"mean", mean}, {"stderr", stderr_}, {"samples", mc_samples}}));
    row[1] = format_double(mean);
    row[2] = format_double(stderr_);
  } else {
    payload.emplace_back("mc", nullptr);
  }
  emit(c, config, std::move(payload), {"exact", "mc_mean", "mc_stderr"}, {row});
  return 0;
}

int run_paths(const Common& c, const std::string& nu_spec, const std::vector<std::int64_t>& n_list,
              int D, int m, const std::vector<double>& eps_list) {
  const BinnedMeasure nu = resolve_nu(nu_spec, m, D);

  JsonObject config{{"subcommand", "paths"}, {"nu", nu_spec}, {"D", std::int64_t{D}},
                    {"m", std::int64_t{m}},  {"format", c.format}};
  JsonArray jn;
  for (std::int64_t n : n_list) jn.emplace_back(n);
  config.emplace_back("n", JsonValue(std::move(jn)));
  JsonArray je;
  for (double e : eps_list) je.emplace_back(e);
  config.emplace_back("eps", JsonValue(std::move(je)));

  JsonArray jrows;
  std::vector<std::vector<std::string>> crows;
  for (std::int64_t n : n_list) {
    const Environment env = sample_environment(n, D, Model::continuous, 0, c.seed);
    const PathStatsReport r = path_stats(env, nu, m, eps_list, {});
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
      JsonObject jrow{{"n", n},
                      {"eps", eps_list[i]},
                      {"exact", r.exact},
                      {"count", r.exact ? JsonValue(r.counts_dec[i]) : JsonValue(nullptr)},
                      {"log_count", r.log_counts[i]},
                      {"slope", r.slopes[i]}};
      jrows.emplace_back(std::move(jrow));
      crows.push_back({std::to_string(n), format_double(eps_list[i]),
                       format_double(r.log_counts[i]), format_double(r.slopes[i])});
    }
  }
  emit(c, config, {{"rows", JsonValue(std::move(jrows))}}, {"n", "eps", "log_count", "slope"},
       crows);
  return 0;
}

int run_discrete(const Common& c, std::int64_t K, int D) {
  const std::vector<RationalPmf> extremes = extreme_points_of_sigma_polytope(K, D);

  // Match each extreme point to its ordering; the correspondence must be a
  // bijection onto the K! orderings.
  std::vector<std::int64_t> alpha(static_cast<std::size_t>(K));
  for (std::int64_t k = 0; k < K; ++k) alpha[static_cast<std::size_t>(k)] = k + 1;
  std::vector<std::string> alpha_of(extremes.size());
  std::int64_t orderings = 0;
  bool bijection = true;
  bool weight_tuples_base = true;
  do {
    ++orderings;
    const RationalPmf sigma = extreme_sigma(alpha, D);
    std::string digits;
    for (std::int64_t a : alpha) digits += std::to_string(a);
    bool matched = false;
    for (std::size_t i = 0; i < extremes.size(); ++i) {
      if (extremes[i] == sigma) {
        if (!alpha_of[i].empty()) bijection = false;  // two orderings, one point
        else alpha_of[i] = digits;
        matched = true;
        break;
      }
    }
    if (!matched) bijection = false;
    if (!verify_weight_tuples(greedy_table(alpha, D)).all_base_permutation)
      weight_tuples_base = false;
  } while (std::next_permutation(alpha.begin(), alpha.end()));
  for (const std::string& a : alpha_of) {
    if (a.empty()) bijection = false;
  }

  const std::size_t tables = enumerate_deterministic_consistent(K, D).size();

  JsonObject config{{"subcommand", "discrete"}, {"K", K}, {"D", std::int64_t{D}},
                    {"format", c.format}};
  JsonArray jpoints;
  std::vector<std::vector<std::string>> crows;
  std::vector<std::string> header{"alpha"};
  for (std::int64_t k = 1; k <= K; ++k) header.push_back("p" + std::to_string(k));
  for (std::size_t i = 0; i < extremes.size(); ++i) {
    const RationalPmf p = extremes[i].normalized();
    JsonArray nums;
    std::vector<std::string> crow{alpha_of[i]};
    for (const BigInt& nu : p.numerators) {
      nums.emplace_back(to_string(nu));
      crow.push_back(fraction(nu, p.denominator));
    }
    jpoints.emplace_back(JsonObject{{"alpha", alpha_of[i]},
                                    {"numerators", JsonValue(std::move(nums))},
                                    {"denominator", to_string(p.denominator)}});
    crows.push_back(std::move(crow));
  }
  JsonObject payload{{"extreme_count", static_cast<std::int64_t>(extremes.size())},
                     {"orderings", orderings},
                     {"deterministic_consistent_tables", static_cast<std::int64_t>(tables)},
                     {"bijection_to_orderings", bijection},
                     {"weight_tuples_base", weight_tuples_base},
                     {"extreme_points", JsonValue(std::move(jpoints))}};
  emit(c, config, std::move(payload), header, crows);
  return 0;
}

int run_lp(const Common& c, const std::string& a_path, const std::string& b_path) {
  const AtomicMeasure a = atoms_of(parse_measure_json(read_file(a_path)));
  const AtomicMeasure b = atoms_of(parse_measure_json(read_file(b_path)));
  const double rho = lp_distance(a, b);
  JsonObject config{{"subcommand", "lp"}, {"a", a_path}, {"b", b_path}, {"format", c.format}};
  emit(c, config, {{"rho", rho}}, {"rho"}, {{format_double(rho)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"percolation-style choice strategies: distributions, geometry, entropy"};
  app.require_subcommand(1);

  Common c;

  auto* sim = app.add_subcommand("simulate", "run a strategy; empirical-vs-target distances");
  std::string sim_strategy;
  int sim_D = 2, sim_m = 100;
  std::int64_t sim_K = 0;
  std::vector<std::int64_t> sim_n;
  sim->add_option("--strategy", sim_strategy, "builtin (max|vee|greedy|uniform) or file")
      ->required();
  sim->add_option("--D", sim_D, "samples per trial")->check(CLI::PositiveNumber);
  sim->add_option("--K", sim_K, "label count for discrete builtins");
  sim->add_option("--n", sim_n, "trial counts (comma list)")->required()->delimiter(',');
  sim->add_option("--m", sim_m, "bins for the distance report")->check(CLI::PositiveNumber);
  add_common(sim, c);

  auto* dual = app.add_subcommand("dual", "grid-entropy estimate by convex duality");
  std::string dual_nu;
  std::vector<int> dual_m{8};
  int dual_D = 2;
  double dual_beta = 1.0;
  dual->add_option("--nu", dual_nu, "builtin (uniform|sigma_max) or measure file")->required();
  dual->add_option("--m", dual_m, "bin counts (comma list)")->delimiter(',');
  dual->add_option("--D", dual_D, "samples per trial")->check(CLI::PositiveNumber);
  dual->add_option("--beta", dual_beta, "inverse temperature");
  add_common(dual, c);

  auto* gibbs = app.add_subcommand("gibbs", "free energy of a potential, exact and Monte Carlo");
  std::string gibbs_tau;
  int gibbs_D = 2, gibbs_m = 0;
  double gibbs_beta = 1.0;
  std::int64_t gibbs_n = 0;
  gibbs->add_option("--tau", gibbs_tau, "potential file or \"zero\"")->required();
  gibbs->add_option("--D", gibbs_D, "samples per trial")->check(CLI::PositiveNumber);
  gibbs->add_option("--m", gibbs_m, "bins for the builtin zero potential");
  auto* gibbs_beta_opt = gibbs->add_option("--beta", gibbs_beta, "inverse temperature override");
  gibbs->add_option("--n", gibbs_n, "Monte Carlo samples (0 = exact only)");
  add_common(gibbs, c);

  auto* paths = app.add_subcommand("paths", "path counts near a target measure");
  std::string paths_nu;
  std::vector<std::int64_t> paths_n;
  int paths_D = 2, paths_m = 8;
  std::vector<double> paths_eps;
  paths->add_option("--nu", paths_nu, "builtin (uniform|sigma_max) or measure file")->required();
  paths->add_option("--n", paths_n, "trial counts (comma list)")->required()->delimiter(',');
  paths->add_option("--D", paths_D, "samples per trial")->check(CLI::PositiveNumber);
  paths->add_option("--m", paths_m, "bins")->check(CLI::PositiveNumber);
  paths->add_option("--eps", paths_eps, "distance thresholds (comma list)")
      ->required()
      ->delimiter(',');
  add_common(paths, c);

  auto* discrete = app.add_subcommand("discrete", "extreme points of the discrete model");
  std::int64_t disc_K = 0;
  int disc_D = 2;
  discrete->add_option("--K", disc_K, "label count")->required()->check(CLI::PositiveNumber);
  discrete->add_option("--D", disc_D, "samples per trial")->check(CLI::PositiveNumber);
  add_common(discrete, c);

  auto* lp = app.add_subcommand("lp", "distance between two measures");
  std::string lp_a, lp_b;
  lp->add_option("--a", lp_a, "measure file")->required();
  lp->add_option("--b", lp_b, "measure file")->required();
  add_common(lp, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return run_simulate(c, sim_strategy, sim_D, sim_K, sim_n, sim_m);
    if (dual->parsed()) return run_dual(c, dual_nu, dual_m, dual_D, dual_beta);
    if (gibbs->parsed())
      return run_gibbs(c, gibbs_tau, gibbs_D, gibbs_m, gibbs_beta_opt->count() > 0, gibbs_beta,
                       gibbs_n);
    if (paths->parsed()) return run_paths(c, paths_nu, paths_n, paths_D, paths_m, paths_eps);
    if (discrete->parsed()) return run_discrete(c, disc_K, disc_D);
    if (lp->parsed()) return run_lp(c, lp_a, lp_b);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}
