#include <cmath>
#include <ostream>
#include <string>

#include "cli/app.hpp"
#include "cli/inputs.hpp"
#include "cli/output.hpp"
#include "ldpustat/errors.hpp"
#include "ldpustat/io.hpp"
#include "ldpustat/ustat.hpp"

namespace ldpustat::cli {

int cmd_ustat(const RunConfig& cfg, std::ostream& out) {
  if (cfg.matrix.empty()) throw InvalidArgument("needs --matrix");
  if (cfg.data.empty()) throw InvalidArgument("needs --data");
  const SymmetricMatrix q = load_matrix(cfg.matrix);
  const DataVector x = parse_data_csv(read_text_file(cfg.data));
  const Motif motif = load_motif(cfg.motif);
  const FiniteBaseMeasure mu = load_mu(cfg.mu.empty() ? "rademacher" : cfg.mu);
  const PhiKernel phi = load_phi(cfg.phi.empty() ? "product" : cfg.phi, motif.vertices(), mu);
  x.validate(mu.size());
  if (x.size() != q.size())
    throw InvalidArgument("data has " + std::to_string(x.size()) + " entries but the matrix is " +
                          std::to_string(q.size()) + "x" + std::to_string(q.size()));

  Json j;
  j["command"] = "ustat " + cfg.action;
  j["n"] = x.size();
  j["motif"] = to_json(motif);
  if (cfg.action == "eval") {
    const double v = cfg.tree ? v_statistic_tree(motif, q, x, phi) : v_statistic(motif, q, x, phi);
    j["v_n"] = num(v);
    if (x.size() >= motif.vertices()) {
      const double u = u_statistic(motif, q, x, phi);
      j["u_n"] = num(u);
      j["gap"] = num(std::abs(u - v));
    } else {
      j["u_n"] = nullptr;
    }
  } else if (cfg.action == "field") {
    if (cfg.site >= x.size()) throw InvalidArgument("--site out of range");
    const auto field = local_field(motif, q, x, phi, cfg.site, cfg.v_statistic ? Statistic::v : Statistic::u);
    j["site"] = cfg.site;
    j["statistic"] = cfg.v_statistic ? "v" : "u";
    j["field"] = nums(field);
  } else {
    throw InvalidArgument("unknown ustat action");
  }
  emit(out, j);
  return kOk;
}

}  // namespace ldpustat::cli
