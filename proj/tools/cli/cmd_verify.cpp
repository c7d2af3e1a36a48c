#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/inputs.hpp"
#include "cli/output.hpp"
#include "ldpustat/errors.hpp"
#include "ldpustat/gibbs.hpp"
#include "ldpustat/io.hpp"
#include "ldpustat/variational.hpp"

namespace ldpustat::cli {

namespace {

double tol_or(const RunConfig& cfg, double fallback) { return cfg.tolerance > 0.0 ? cfg.tolerance : fallback; }

VariationalProblem curie_weiss() {
  return {Family::multilinear, Motif::edge(), StepKernel::constant(1.0), FiniteBaseMeasure::rademacher(),
          std::nullopt};
}

SolveConfig base_solve(const RunConfig& cfg) {
  SolveConfig sc;
  sc.seed = cfg.seed;
  sc.multistart = cfg.multistart;
  sc.damping = cfg.damping;
  return sc;
}

Json check_ldp_tail(const RunConfig& cfg) {
  const double t = cfg.t;
  const std::vector<std::size_t> ns = parse_size_list(cfg.n_list.empty() ? "8,12,16,20" : cfg.n_list);
  const auto points =
      tail_probability_exact([](std::size_t n) { return GibbsModel::ising_complete(n, 0.0); }, t, ns);
  const double limit = constrained_rate(curie_weiss(), t, base_solve(cfg)).rate;
  const double bound = tol_or(cfg, 0.15);

  std::string csv = "n,rate,limit_rate,gap\n";
  std::vector<double> gaps;
  Json pts = Json::array();
  for (const auto& p : points) {
    gaps.push_back(std::abs(p.rate - limit));
    csv += std::to_string(p.n) + "," + format_number(p.rate) + "," + format_number(limit) + "," +
           format_number(gaps.back()) + "\n";
    pts.push_back({{"n", p.n}, {"rate", num(p.rate)}, {"gap", num(gaps.back())}});
  }
  bool monotone = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) monotone &= gaps[i] <= gaps[i - 1];
  const bool passed = monotone && !gaps.empty() && gaps.back() < bound;
  write_file(cfg.out, "ldp_tail.csv", csv);
  return {{"name", "ldp-tail"}, {"passed", passed},      {"t", num(t)},         {"limit_rate", num(limit)},
          {"points", pts},      {"monotone", monotone}, {"final_gap", num(gaps.empty() ? 0.0 : gaps.back())},
          {"bound", num(bound)}};
}

Json check_z_convergence(const RunConfig& cfg) {
  const double theta = cfg.theta.value_or(1.0);
  const bool ising = parse_complete_family(cfg.family) == CompleteFamily::ising;
  const GibbsModel model =
      ising ? GibbsModel::ising_complete(cfg.n, theta) : GibbsModel::potts_complete(cfg.n, cfg.c, theta);
  const double exact = exact_logz(model);
  std::vector<double> grid = cfg.grid.empty() ? parse_grid("0:" + format_number(theta) + ":21") : parse_grid(cfg.grid);
  ChainConfig cc;
  cc.sweeps = cfg.sweeps == 0 ? 100000 : cfg.sweeps;
  cc.burn_in = cfg.burnin;
  cc.thin = cfg.thin;
  cc.seed = cfg.seed;
  TiOptions to;
  to.refine = cfg.refine;
  const TiEstimate ti = estimate_logz_ti(model, grid, cc, to);
  const double bound = tol_or(cfg, 0.01);
  const bool ti_ok = std::abs(ti.value - exact) < bound;

  // Finite-n closed sums against the limiting value.
  const std::vector<std::size_t> trend_ns = {500, 1000, 2000, 5000};
  const FiniteBaseMeasure mu = ising ? FiniteBaseMeasure::rademacher() : FiniteBaseMeasure::uniform_colors(cfg.c);
  VariationalProblem problem = curie_weiss();
  if (!ising) problem = {Family::potts, Motif::edge(), StepKernel::constant(1.0), mu, std::nullopt};
  const double limit = solve_z(problem, theta, base_solve(cfg)).value;
  std::string csv = "n,z_n,z_limit,gap\n";
  std::vector<double> gaps;
  Json trend = Json::array();
  for (std::size_t n : trend_ns) {
    const double zn = exact_logz_complete(ising ? CompleteFamily::ising : CompleteFamily::potts, n, theta, mu);
    gaps.push_back(std::abs(zn - limit));
    csv += std::to_string(n) + "," + format_number(zn) + "," + format_number(limit) + "," + format_number(gaps.back()) +
           "\n";
    trend.push_back({{"n", n}, {"z_n", num(zn)}, {"gap", num(gaps.back())}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) decreasing &= gaps[i] < gaps[i - 1];
  const bool trend_ok = decreasing && gaps.back() < 5e-3;
  write_file(cfg.out, "z_convergence.csv", csv);

  std::string ti_csv = "theta,mean_u,standard_error\n";
  for (const auto& p : ti.points)
    ti_csv += format_number(p.theta) + "," + format_number(p.mean_u) + "," + format_number(p.standard_error) + "\n";
  write_file(cfg.out, "ti.csv", ti_csv);

  return {{"name", "z-convergence"},
          {"passed", ti_ok && trend_ok},
          {"n", cfg.n},
          {"theta", num(theta)},
          {"exact", num(exact)},
          {"ti", num(ti.value)},
          {"ti_error", num(ti.error)},
          {"ti_passed", ti_ok},
          {"bound", num(bound)},
          {"z_limit", num(limit)},
          {"trend", trend},
          {"trend_passed", trend_ok}};
}

Json check_weak_law(const RunConfig& cfg) {
  const double theta = cfg.theta.value_or(1.0);
  const std::size_t n = cfg.n == 10 ? 400 : cfg.n;
  const GibbsModel model = GibbsModel::ising_complete(n, theta);
  const VariationalProblem problem = curie_weiss();
  const SolveResult res = solve_z(problem, theta, base_solve(cfg));
  std::vector<LimitProfile> limits;
  for (const auto& o : res.optimizers) limits.push_back({{0.0, 1.0}, profile_means(problem, o.profile)});
  ChainConfig cc;
  cc.sweeps = cfg.sweeps == 0 ? 2000 : cfg.sweeps;
  cc.burn_in = cfg.burnin;
  cc.thin = cfg.thin;
  cc.seed = cfg.seed;
  const WeakLawReport rep = weak_law_check(model, limits, default_test_functions(), cc, cfg.chains);
  const double bound = tol_or(cfg, 0.05);
  double magnetization = 0.0;
  std::string csv = "test,discrepancy,standard_error\n";
  Json entries = Json::array();
  for (const auto& e : rep.entries) {
    if (e.name == "u^0") magnetization = e.discrepancy;
    csv += e.name + "," + format_number(e.discrepancy) + "," + format_number(e.standard_error) + "\n";
    entries.push_back({{"test", e.name}, {"discrepancy", num(e.discrepancy)}});
  }
  write_file(cfg.out, "weak_law.csv", csv);
  return {{"name", "weak-law"},
          {"passed", magnetization < bound},
          {"n", n},
          {"theta", num(theta)},
          {"magnetization_discrepancy", num(magnetization)},
          {"bound", num(bound)},
          {"surrogate", num(rep.surrogate)},
          {"entries", entries}};
}

Json check_legendre(const RunConfig& cfg) {
  const VariationalProblem problem = make_problem(cfg);
  const SolveConfig sc = base_solve(cfg);
  const std::vector<double> grid = cfg.grid.empty() ? parse_grid("0.55:1.25:15") : parse_grid(cfg.grid);
  const double bound = tol_or(cfg, 1e-4);
  const double h = 1e-4;

  std::string csv = "theta,z,z_prime,rate,residual,flagged\n";
  Json pts = Json::array();
  double worst = 0.0;
  std::size_t used = 0;
  for (double theta : grid) {
    const SolveResult mid = solve_z(problem, theta, sc);
    std::vector<double> ts;
    for (const auto& o : mid.optimizers) ts.push_back(o.statistic);
    const auto [lo, hi] = std::minmax_element(ts.begin(), ts.end());
    const bool flagged = *hi - *lo > sc.flag_tolerance;
    const double zp = (solve_z(problem, theta + h, sc).value - solve_z(problem, theta - h, sc).value) / (2 * h);
    double rate = 0.0, residual = 0.0;
    if (!flagged) {
      rate = constrained_rate(problem, zp, sc).rate;
      residual = std::abs(rate + mid.value - theta * zp);
      worst = std::max(worst, residual);
      ++used;
    }
    csv += format_number(theta) + "," + format_number(mid.value) + "," + format_number(zp) + "," +
           format_number(rate) + "," + format_number(residual) + "," + (flagged ? "1" : "0") + "\n";
    pts.push_back({{"theta", num(theta)}, {"z_prime", num(zp)}, {"residual", num(residual)}, {"flagged", flagged}});
  }
  write_file(cfg.out, "legendre.csv", csv);

  // Constrained against parametric rates at five grid points spread over the range.
  Json agreement = Json::array();
  double worst_agree = 0.0;
  const auto rates = legendre_rate(problem, grid, sc);
  std::vector<const RatePoint*> usable;
  for (const auto& p : rates)
    if (!p.flagged) usable.push_back(&p);
  const std::size_t samples = std::min<std::size_t>(5, usable.size());
  for (std::size_t s = 0; s < samples; ++s) {
    const RatePoint& p = *usable[samples == 1 ? 0 : s * (usable.size() - 1) / (samples - 1)];
    const double direct = constrained_rate(problem, p.t, sc).rate;
    worst_agree = std::max(worst_agree, std::abs(direct - p.rate));
    agreement.push_back({{"t", num(p.t)}, {"legendre", num(p.rate)}, {"constrained", num(direct)}});
  }
  const bool passed = used > 0 && worst < bound && samples == 5 && worst_agree < bound;
  return {{"name", "legendre-consistency"},
          {"passed", passed},
          {"points", pts},
          {"worst_residual", num(worst)},
          {"agreement", agreement},
          {"worst_agreement", num(worst_agree)},
          {"bound", num(bound)}};
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  Json checks = Json::array();
  const std::string& a = cfg.action;
  const bool all = a == "all";
  if (!all && a != "ldp-tail" && a != "z-convergence" && a != "weak-law" && a != "legendre-consistency")
    throw InvalidArgument("unknown verify action");
  if (all || a == "ldp-tail") checks.push_back(check_ldp_tail(cfg));
  if (all || a == "z-convergence") checks.push_back(check_z_convergence(cfg));
  if (all || a == "weak-law") checks.push_back(check_weak_law(cfg));
  if (all || a == "legendre-consistency") checks.push_back(check_legendre(cfg));
  bool passed = true;
  for (const auto& c : checks) passed &= c["passed"].get<bool>();
  Json summary;
  summary["command"] = "verify " + a;
  summary["checks"] = checks;
  summary["passed"] = passed;
  write_file(cfg.out, "verify_summary.json", summary.dump(2) + "\n");
  emit(out, summary);
  return passed ? kOk : kCheckFailed;
}

}  // namespace ldpustat::cli
