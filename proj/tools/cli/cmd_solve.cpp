#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/inputs.hpp"
#include "cli/output.hpp"
#include "ldpustat/errors.hpp"
#include "ldpustat/io.hpp"
#include "ldpustat/variational.hpp"

namespace ldpustat::cli {

namespace {

SolveConfig solve_config(const RunConfig& cfg) {
  SolveConfig sc;
  sc.blocks = cfg.blocks;
  sc.damping = cfg.damping;
  sc.multistart = cfg.multistart;
  sc.seed = cfg.seed;
  if (!cfg.grid.empty()) sc.theta_grid = parse_grid(cfg.grid);
  sc.validate();
  return sc;
}

Json profile_ref(const RunConfig& cfg, const std::string& name, const Matrix& profile) {
  if (cfg.out.empty()) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < profile.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t k = 0; k < profile.cols(); ++k) row.push_back(num(profile(i, k)));
      rows.push_back(row);
    }
    return rows;
  }
  write_file(cfg.out, name, matrix_to_csv(profile));
  return name;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const VariationalProblem problem = make_problem(cfg);
  const SolveConfig sc = solve_config(cfg);
  Json j;
  j["command"] = "solve " + cfg.action;
  j["family"] = std::string(family_name(problem.family));
  j["motif"] = to_json(problem.motif);

  if (cfg.action == "zlimit") {
    if (!cfg.theta) throw InvalidArgument("zlimit needs --theta");
    const SolveResult res = solve_z(problem, *cfg.theta, sc);
    j["theta"] = num(res.theta);
    j["z_value"] = num(res.value);
    j["constant_lower_bound"] = num(res.constant_lower_bound);
    j["widths"] = nums(res.widths);
    Json opts = Json::array();
    std::vector<double> stats;
    for (std::size_t k = 0; k < res.optimizers.size(); ++k) {
      const Optimizer& o = res.optimizers[k];
      stats.push_back(o.statistic);
      opts.push_back({{"value", num(o.value)},
                      {"statistic", num(o.statistic)},
                      {"penalty", num(o.penalty)},
                      {"residual", num(o.residual)},
                      {"means", nums(profile_means(problem, o.profile))},
                      {"profile", profile_ref(cfg, "optimizer_" + std::to_string(k) + ".csv", o.profile)}});
    }
    j["optimizers"] = opts;
    j["residual"] = num(res.residual);
    bool multiple_statistics = false;
    for (double s : stats) multiple_statistics |= std::abs(s - stats.front()) > sc.flag_tolerance;
    j["flags"] = {{"multiple_optimizers", res.optimizers.size() > 1},
                  {"statistic_not_unique", multiple_statistics}};
    std::size_t converged = 0, fallback = 0;
    for (const auto& s : res.starts) {
      converged += s.converged;
      fallback += s.fallback;
    }
    j["starts"] = {{"total", res.starts.size()}, {"converged", converged}, {"fallback", fallback}};
  } else if (cfg.action == "rate") {
    const std::vector<double> grid = sc.theta_grid.empty() ? kDefaultRateGrid : sc.theta_grid;
    const auto points = legendre_rate(problem, grid, sc);
    std::string csv = "theta,t,rate,z,flagged\n";
    Json arr = Json::array();
    for (const auto& p : points) {
      csv += format_number(p.theta) + "," + format_number(p.t) + "," + format_number(p.rate) + "," +
             format_number(p.z) + "," + (p.flagged ? "1" : "0") + "\n";
      arr.push_back({{"theta", num(p.theta)},
                     {"t", num(p.t)},
                     {"rate", num(p.rate)},
                     {"z", num(p.z)},
                     {"flagged", p.flagged},
                     {"ts", nums(p.ts)}});
    }
    write_file(cfg.out, "rate.csv", csv);
    j["points"] = arr;
  } else if (cfg.action == "constrained") {
    const ConstrainedRate cr = constrained_rate(problem, cfg.t, sc);
    j["t"] = num(cr.t);
    j["rate"] = num(cr.rate);
    j["multiplier"] = num(cr.multiplier);
    j["violation"] = num(cr.violation);
    j["iterations"] = cr.iterations;
    j["witness"] = profile_ref(cfg, "witness.csv", cr.witness);
  } else {
    throw InvalidArgument("unknown solve action");
  }
  emit(out, j);
  return kOk;
}

}  // namespace ldpustat::cli
