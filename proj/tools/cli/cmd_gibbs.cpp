#include <cmath>
#include <functional>
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

bool complete_family(const RunConfig& cfg) { return cfg.matrix.empty(); }

GibbsModel model_for(const RunConfig& cfg, std::size_t n, double theta) {
  const Statistic kind = cfg.v_statistic ? Statistic::v : Statistic::u;
  if (!complete_family(cfg)) {
    const Motif motif = load_motif(cfg.motif);
    const FiniteBaseMeasure mu = load_mu(cfg.mu.empty() ? "rademacher" : cfg.mu);
    PhiKernel phi = load_phi(cfg.phi.empty() ? "product" : cfg.phi, motif.vertices(), mu);
    return GibbsModel(motif, load_matrix(cfg.matrix), std::move(phi), mu, theta, kind);
  }
  GibbsModel base = parse_complete_family(cfg.family) == CompleteFamily::ising
                        ? GibbsModel::ising_complete(n, theta,
                                                     load_mu(cfg.mu.empty() ? "rademacher" : cfg.mu))
                        : GibbsModel::potts_complete(n, cfg.c, theta);
  if (kind == Statistic::v)
    return GibbsModel(base.motif(), base.q(), base.phi(), base.mu(), theta, Statistic::v);
  return base;
}

GibbsModel model_for(const RunConfig& cfg, double theta) { return model_for(cfg, cfg.n, theta); }

double require_theta(const RunConfig& cfg) {
  if (!cfg.theta) throw InvalidArgument("needs --theta");
  return *cfg.theta;
}

ChainConfig chain_config(const RunConfig& cfg, std::size_t default_sweeps) {
  ChainConfig cc;
  cc.sweeps = cfg.sweeps == 0 ? default_sweeps : cfg.sweeps;
  cc.burn_in = cfg.burnin;
  cc.thin = cfg.thin;
  cc.seed = cfg.seed;
  cc.blocks = cfg.blocks == 0 ? 1 : cfg.blocks;
  cc.validate();
  return cc;
}

Json metadata_json(const ChainMetadata& m) {
  return {{"seed", m.seed},           {"sweeps", m.sweeps},       {"burn_in", m.burn_in},
          {"thin", m.thin},           {"blocks", m.blocks},       {"model_hash", m.model_hash},
          {"max_drift", num(m.max_drift)}, {"fast_path", m.fast_path}};
}

std::string chain_csv(const ChainRecord& rec) {
  std::string csv = "sweep,u_n";
  const ChainSample* first = rec.samples.empty() ? nullptr : &rec.samples.front();
  if (first) {
    for (std::size_t b = 0; b < first->block_means.size(); ++b) csv += ",block_mean_" + std::to_string(b + 1);
    for (std::size_t k = 0; k < first->color_fracs.size(); ++k) csv += ",color_frac_" + std::to_string(k + 1);
  }
  csv += "\n";
  for (const auto& s : rec.samples) {
    csv += std::to_string(s.sweep) + "," + format_number(s.u_n);
    for (double v : s.block_means) csv += "," + format_number(v);
    for (double v : s.color_fracs) csv += "," + format_number(v);
    csv += "\n";
  }
  return csv;
}

// Candidate limits: every optimizer of the limiting problem, as block means.
std::vector<LimitProfile> limit_profiles(const RunConfig& cfg, const GibbsModel& model, double theta) {
  VariationalProblem problem{Family::multilinear, model.motif(),
                             cfg.w.empty() ? StepKernel::constant(1.0) : load_kernel(cfg.w), model.mu(),
                             std::nullopt};
  SolveConfig sc;
  sc.seed = cfg.seed;
  sc.multistart = cfg.multistart;
  const SolveResult res = solve_z(problem, theta, sc);
  std::vector<double> breakpoints{0.0};
  for (double w : res.widths) breakpoints.push_back(breakpoints.back() + w);
  breakpoints.back() = 1.0;
  std::vector<LimitProfile> limits;
  for (const auto& o : res.optimizers) limits.push_back({breakpoints, profile_means(problem, o.profile)});
  return limits;
}

}  // namespace

int cmd_gibbs(const RunConfig& cfg, std::ostream& out) {
  Json j;
  j["command"] = "gibbs " + cfg.action;
  EnumerationOptions eo;
  eo.reduce_twins = !cfg.no_twins;

  if (cfg.action == "exact") {
    const GibbsModel model = model_for(cfg, require_theta(cfg));
    const StateTable table = enumerate_states(model, eo);
    j["n"] = model.n();
    j["theta"] = num(model.theta());
    j["z_n"] = num(exact_logz(model, eo));
    j["states"] = table.log_weight.size();
    j["twin_reduced"] = table.reduced;
    j["model_hash"] = model.hash();
  } else if (cfg.action == "complete") {
    if (!complete_family(cfg)) throw InvalidArgument("complete takes --family and --n, not --matrix");
    const double theta = require_theta(cfg);
    const CompleteFamily fam = parse_complete_family(cfg.family);
    const FiniteBaseMeasure mu = fam == CompleteFamily::ising ? load_mu(cfg.mu.empty() ? "rademacher" : cfg.mu)
                                                              : FiniteBaseMeasure::uniform_colors(cfg.c);
    j["n"] = cfg.n;
    j["theta"] = num(theta);
    j["z_n"] = num(exact_logz_complete(fam, cfg.n, theta, mu));
  } else if (cfg.action == "chain") {
    const GibbsModel model = model_for(cfg, require_theta(cfg));
    const ChainRecord rec = glauber_chain(model, chain_config(cfg, 1000));
    std::vector<double> us;
    for (const auto& s : rec.samples) us.push_back(s.u_n);
    const BatchMean bm = batch_means(us);
    j["samples"] = rec.samples.size();
    j["mean_u_n"] = num(bm.mean);
    j["standard_error"] = num(bm.standard_error);
    j["metadata"] = metadata_json(rec.metadata);
    write_file(cfg.out, "chain.csv", chain_csv(rec));
    write_file(cfg.out, "chain_meta.json", metadata_json(rec.metadata).dump(2) + "\n");
  } else if (cfg.action == "ti") {
    const double theta = require_theta(cfg);
    const std::vector<double> grid =
        cfg.grid.empty() ? parse_grid("0:" + format_number(theta) + ":21") : parse_grid(cfg.grid);
    const GibbsModel model = model_for(cfg, theta);
    TiOptions to;
    to.refine = cfg.refine;
    const TiEstimate est = estimate_logz_ti(model, grid, chain_config(cfg, 10000), to);
    j["theta"] = num(grid.back());
    j["z_n"] = num(est.value);
    j["standard_error"] = num(est.standard_error);
    j["truncation_error"] = num(est.truncation_error);
    j["error"] = num(est.error);
    std::string csv = "theta,mean_u,standard_error\n";
    Json pts = Json::array();
    for (const auto& p : est.points) {
      csv += format_number(p.theta) + "," + format_number(p.mean_u) + "," + format_number(p.standard_error) + "\n";
      pts.push_back({{"theta", num(p.theta)}, {"mean_u", num(p.mean_u)}, {"standard_error", num(p.standard_error)}});
    }
    j["points"] = pts;
    write_file(cfg.out, "ti.csv", csv);
  } else if (cfg.action == "tail") {
    if (!complete_family(cfg)) throw InvalidArgument("tail varies n and needs --family, not --matrix");
    const std::vector<std::size_t> ns = parse_size_list(cfg.n_list.empty() ? "8,12,16,20" : cfg.n_list);
    const auto points =
        tail_probability_exact([&](std::size_t n) { return model_for(cfg, n, 0.0); }, cfg.t, ns, eo);
    std::string csv = "n,log_probability,rate\n";
    Json pts = Json::array();
    for (const auto& p : points) {
      csv += std::to_string(p.n) + "," + format_number(p.log_probability) + "," + format_number(p.rate) + "\n";
      pts.push_back({{"n", p.n}, {"log_probability", num(p.log_probability)}, {"rate", num(p.rate)}});
    }
    j["t"] = num(cfg.t);
    j["points"] = pts;
    write_file(cfg.out, "tail.csv", csv);
  } else if (cfg.action == "weaklaw") {
    const double theta = require_theta(cfg);
    const GibbsModel model = model_for(cfg, theta);
    if (parse_family(cfg.family) != Family::multilinear && complete_family(cfg))
      throw InvalidArgument("weaklaw compares real-valued profiles; use --family ising");
    const auto limits = limit_profiles(cfg, model, theta);
    const WeakLawReport rep =
        weak_law_check(model, limits, default_test_functions(), chain_config(cfg, 2000), cfg.chains);
    Json entries = Json::array();
    for (const auto& e : rep.entries)
      entries.push_back({{"test", e.name}, {"discrepancy", num(e.discrepancy)}, {"standard_error", num(e.standard_error)}});
    j["limits"] = limits.size();
    j["entries"] = entries;
    j["surrogate"] = num(rep.surrogate);
    j["surrogate_error"] = num(rep.surrogate_error);
    j["chains"] = rep.chains;
    j["samples"] = rep.samples;
  } else {
    throw InvalidArgument("unknown gibbs action");
  }
  emit(out, j);
  return kOk;
}

}  // namespace ldpustat::cli
