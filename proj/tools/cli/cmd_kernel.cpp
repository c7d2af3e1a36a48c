#include <ostream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/inputs.hpp"
#include "cli/output.hpp"
#include "ldpustat/errors.hpp"
#include "ldpustat/io.hpp"
#include "ldpustat/kernel.hpp"

namespace ldpustat::cli {

namespace {

StepKernel first_kernel(const RunConfig& cfg) {
  if (!cfg.wn.empty()) return load_kernel(cfg.wn);
  if (!cfg.matrix.empty()) return embed_matrix(load_matrix(cfg.matrix));
  if (!cfg.w.empty()) return load_kernel(cfg.w);
  throw InvalidArgument("need a kernel: --w, --wn or --matrix");
}

StepKernel second_kernel(const RunConfig& cfg) {
  if (!cfg.matrix2.empty()) return embed_matrix(load_matrix(cfg.matrix2));
  if (!cfg.w.empty()) return load_kernel(cfg.w);
  throw InvalidArgument("need a second kernel: --w or --matrix2");
}

StepKernel single_kernel(const RunConfig& cfg) {
  if (!cfg.w.empty()) return load_kernel(cfg.w);
  return first_kernel(cfg);
}

CutOptions cut_options(const RunConfig& cfg) {
  CutOptions o;
  o.exact_limit = cfg.exact_limit;
  o.restarts = cfg.restarts;
  o.seed = cfg.seed;
  return o;
}

}  // namespace

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  Json j;
  j["command"] = "kernel " + cfg.action;
  if (cfg.action == "cutnorm") {
    const StepKernel w = single_kernel(cfg);
    const auto est = cut_distance(w, StepKernel::constant(0.0), cut_options(cfg));
    j["blocks"] = w.blocks();
    j["cut_norm"] = num(est.value);
    j["exact"] = est.exact;
  } else if (cfg.action == "cutdist") {
    const StepKernel a = first_kernel(cfg), b = second_kernel(cfg);
    const auto est = cut_distance(a, b, cut_options(cfg));
    j["cut_distance"] = num(est.value);
    j["exact"] = est.exact;
  } else if (cfg.action == "weakcut") {
    const StepKernel a = first_kernel(cfg), b = second_kernel(cfg);
    WeakCutBudget budget;
    budget.force_annealing = cfg.force_annealing;
    budget.anneal_steps = cfg.anneal_steps;
    budget.seed = cfg.seed;
    budget.cut = cut_options(cfg);
    const auto res = weak_cut_distance(a, b, budget);
    const auto strong = cut_distance(a, b, cut_options(cfg));
    j["weak_cut_upper_bound"] = num(res.value);
    j["certified_exact"] = res.certified_exact;
    j["permutation"] = res.permutation;
    j["cut_distance"] = num(strong.value);
  } else if (cfg.action == "norms") {
    const StepKernel w = single_kernel(cfg);
    Json norms = Json::object();
    std::string token;
    std::vector<std::string> tokens;
    for (char ch : cfg.r_list + ",") {
      if (ch == ',') {
        if (!token.empty()) tokens.push_back(token);
        token.clear();
      } else if (ch != ' ') {
        token += ch;
      }
    }
    for (const auto& tk : tokens) {
      const double r = parse_extended(tk);
      norms[exponent_key(r)] = num(lp_norm(w, r));
    }
    j["norms"] = norms;
  } else if (cfg.action == "degrees") {
    const StepKernel w = single_kernel(cfg);
    const auto prof = degree_profile(w);
    j["breakpoints"] = nums(prof.breakpoints);
    j["values"] = nums(prof.values);
    j["integral"] = num(prof.integral());
    j["sup"] = num(prof.lp_norm(kInfinity));
    std::string csv = "x_left,x_right,degree\n";
    for (std::size_t i = 0; i < prof.blocks(); ++i)
      csv += format_number(prof.breakpoints[i]) + "," + format_number(prof.breakpoints[i + 1]) + "," +
             format_number(prof.values[i]) + "\n";
    write_file(cfg.out, "degree_profile.csv", csv);
  } else if (cfg.action == "assumptions") {
    if (cfg.wn.empty() && cfg.matrix.empty()) throw InvalidArgument("assumptions needs --wn (or --matrix)");
    if (cfg.w.empty()) throw InvalidArgument("assumptions needs --w");
    const StepKernel wn = first_kernel(cfg), w = load_kernel(cfg.w);
    const Motif motif = load_motif(cfg.motif);
    const double q = cfg.q.value_or(kInfinity);
    const auto report = check_assumptions(wn, w, motif, cfg.p, q);
    j["report"] = to_json(report);
    write_file(cfg.out, "assumptions.json", to_json(report).dump(2) + "\n");
  } else {
    throw InvalidArgument("unknown kernel action");
  }
  emit(out, j);
  return kOk;
}

}  // namespace ldpustat::cli
