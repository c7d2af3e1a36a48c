#include "cli/app.hpp"

#include <ostream>

#include <CLI11.hpp>

#include "ldpustat/errors.hpp"
#include "ldpustat/variational.hpp"

namespace ldpustat::cli {

namespace {

struct Group {
  const char* name;
  const char* help;
  std::vector<std::pair<const char*, const char*>> actions;
};

const std::vector<Group>& groups() {
  static const std::vector<Group> g = {
      {"kernel",
       "Cut norms, cut distances, L^r norms, degree profiles and assumption checks",
       {{"cutnorm", "cut norm of --w or --matrix"},
        {"cutdist", "strong cut distance between --wn and --w"},
        {"weakcut", "block-permutation upper bound on the weak cut distance"},
        {"norms", "L^r norms for the exponents in --r"},
        {"degrees", "degree profile r_W(x) = int |W(x,y)| dy"},
        {"assumptions", "regularity validators for --wn, --w, --motif, --p, --q"}}},
      {"ustat",
       "Inhomogeneous U/V statistics",
       {{"eval", "U_n, V_n and |U_n - V_n| for --matrix, --data, --motif, --phi"},
        {"field", "local field at --site"}}},
      {"solve",
       "Limiting variational problems",
       {{"zlimit", "Z(theta) and its optimizers"},
        {"rate", "Legendre rate curve over --grid"},
        {"constrained", "constrained rate I(t) at --t"}}},
      {"gibbs",
       "Finite-n Gibbs measures",
       {{"exact", "Z_n(theta) by enumeration"},
        {"complete", "Z_n(theta) by the complete-graph type-class sum"},
        {"chain", "heat-bath chain records"},
        {"ti", "thermodynamic integration estimate of Z_n"},
        {"tail", "exact -log P(U_n >= t) / n over --n-list"},
        {"weaklaw", "empirical profile versus limiting optimizers"}}},
      {"verify",
       "End-to-end checks with pass/fail summaries",
       {{"ldp-tail", "tail rates approach the constrained rate"},
        {"z-convergence", "TI versus exact Z_n, and closed-sum Z_n versus Z"},
        {"weak-law", "chain magnetization versus the optimizer set"},
        {"legendre-consistency", "Legendre curve versus constrained rates"},
        {"all", "every verify scenario"}}},
  };
  return g;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inhomogeneous U-statistics: large deviations, variational limits and Gibbs measures", "ldpustat"};
  app.set_config("--config", "", "TOML/INI file supplying flag values; command-line flags win");
  app.require_subcommand(1);
  RunConfig cfg;
  std::string theta_text, q_text, p_text;

  app.add_option("--matrix", cfg.matrix, "symmetric matrix CSV (Q_n)");
  app.add_option("--matrix2", cfg.matrix2, "second matrix CSV for two-kernel commands");
  app.add_option("--w", cfg.w, "kernel CSV: m x m block values, optional breakpoint header row");
  app.add_option("--wn", cfg.wn, "finite-n kernel CSV");
  app.add_option("--motif", cfg.motif, "builtin motif (K2, K3, P3, S2, C4, ...) or edge-list file");
  app.add_option("--phi", cfg.phi, "product | monochrome | table:PATH");
  app.add_option("--mu", cfg.mu, "rademacher | uniform:c | csv:PATH");
  app.add_option("--data", cfg.data, "CSV of atom indices");
  app.add_option("--family", cfg.family, "ising | multilinear | potts | generic");
  app.add_option("--out", cfg.out, "directory for CSV/JSON artifacts");
  app.add_option("--theta", theta_text, "inverse temperature");
  app.add_option("--p", p_text, "tail exponent p of the envelope (number or inf)");
  app.add_option("--q", q_text, "kernel moment exponent q (number or inf)");
  app.add_option("--t", cfg.t, "threshold / constraint level");
  app.add_option("--n", cfg.n, "number of sites");
  app.add_option("--c", cfg.c, "number of colors");
  app.add_option("--blocks", cfg.blocks, "solver blocks / chain profile blocks");
  app.add_option("--site", cfg.site, "site index (0-based)");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--sweeps", cfg.sweeps, "recorded sweeps per chain");
  app.add_option("--burnin", cfg.burnin, "burn-in sweeps");
  app.add_option("--thin", cfg.thin, "record every k-th sweep");
  app.add_option("--chains", cfg.chains, "independent chains");
  app.add_option("--multistart", cfg.multistart, "solver starts");
  app.add_option("--damping", cfg.damping, "fixed-point damping in (0, 1]");
  app.add_option("--grid", cfg.grid, "theta grid: a,b,c or start:stop:count");
  app.add_option("--n-list", cfg.n_list, "comma-separated sizes");
  app.add_option("--r", cfg.r_list, "comma-separated norm exponents (inf allowed)");
  app.add_option("--tolerance", cfg.tolerance, "check tolerance (0 = scenario default)");
  app.add_option("--exact-limit", cfg.exact_limit, "largest block count for the exact cut norm");
  app.add_option("--restarts", cfg.restarts, "cut-norm heuristic restarts");
  app.add_option("--anneal-steps", cfg.anneal_steps, "annealing steps per restart");
  app.add_flag("--force-annealing", cfg.force_annealing, "skip exhaustive permutation search");
  app.add_flag("--no-twins", cfg.no_twins, "enumerate raw states without twin reduction");
  app.add_flag("--tree", cfg.tree, "use the tree fast path for V_n");
  app.add_flag("--refine", cfg.refine, "refine the TI grid until the truncation estimate is small");
  app.add_flag("--v-statistic", cfg.v_statistic, "Gibbs weights use V_n instead of U_n");

  for (const auto& g : groups()) {
    auto* sub = app.add_subcommand(g.name, g.help);
    sub->require_subcommand(1);
    sub->fallthrough();
    for (const auto& [name, help] : g.actions) sub->add_subcommand(name, help)->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  for (auto* sub : app.get_subcommands()) {
    cfg.group = sub->get_name();
    for (auto* action : sub->get_subcommands()) cfg.action = action->get_name();
  }

  try {
    if (!theta_text.empty()) cfg.theta = std::stod(theta_text);
    if (!q_text.empty()) cfg.q = q_text == "inf" ? kInfinity : std::stod(q_text);
    if (!p_text.empty()) cfg.p = p_text == "inf" ? kInfinity : std::stod(p_text);
  } catch (const std::exception&) {
    err << "error: --theta/--p/--q must be numbers\n";
    return kUsage;
  }

  try {
    if (cfg.group == "kernel") return cmd_kernel(cfg, out);
    if (cfg.group == "ustat") return cmd_ustat(cfg, out);
    if (cfg.group == "solve") return cmd_solve(cfg, out);
    if (cfg.group == "gibbs") return cmd_gibbs(cfg, out);
    if (cfg.group == "verify") return cmd_verify(cfg, out);
  } catch (const ConvergenceError& e) {
    err << "error: " << cfg.group << " " << cfg.action << ": " << e.what() << '\n';
    return kCheckFailed;
  } catch (const InvalidArgument& e) {
    err << "error: " << cfg.group << " " << cfg.action << ": " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << cfg.group << " " << cfg.action << ": " << e.what() << '\n';
    return kUsage;
  } catch (const DegenerateInput& e) {
    err << "error: " << cfg.group << " " << cfg.action << ": " << e.what() << '\n';
    return kUsage;
  } catch (const LimitExceeded& e) {
    err << "error: " << cfg.group << " " << cfg.action << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << cfg.group << " " << cfg.action << ": " << e.what() << '\n';
    return kCheckFailed;
  }
  err << "error: unknown command\n";
  return kUsage;
}

}  // namespace ldpustat::cli
