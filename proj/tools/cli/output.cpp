#include "cli/output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "ldpustat/errors.hpp"
#include "ldpustat/io.hpp"

namespace ldpustat::cli {

Json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

Json nums(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

std::string exponent_key(double r) { return format_number(r); }

namespace {

Json norms_json(const std::map<double, double>& norms) {
  Json j = Json::object();
  for (const auto& [r, v] : norms) j[exponent_key(r)] = num(v);
  return j;
}

Json degree_json(const DegreeStats& d) {
  return Json{{"mean", num(d.mean)}, {"mean_power", num(d.mean_power)}, {"sup", num(d.sup)}, {"ui_tail", num(d.ui_tail)}};
}

}  // namespace

Json to_json(const AssumptionReport& r) {
  Json j;
  j["p"] = num(r.p);
  j["q"] = num(r.q);
  j["q_delta"] = num(r.q_delta);
  j["motif"] = Json{{"vertices", r.motif_vertices}, {"max_degree", r.motif_max_degree}};
  j["q_delta_norms"] = Json{{"wn", norms_json(r.norms_wn)}, {"w", norms_json(r.norms_w)}};
  j["degree_profile"] = Json{{"wn", degree_json(r.degree_wn)}, {"w", degree_json(r.degree_w)}};
  j["flags"] = Json{{"holder_pq", r.holder_pq},         {"q_moment", r.q_moment},
                    {"sup_bounded", r.sup_bounded},     {"degree_l1", r.degree_l1},
                    {"degree_ui", r.degree_ui},         {"degree_sup", r.degree_sup},
                    {"applicable_edge", r.applicable_edge}, {"applicable_star", r.applicable_star},
                    {"applicable_tree", r.applicable_tree}};
  return j;
}

Json to_json(const Motif& motif) {
  Json edges = Json::array();
  for (const auto& [a, b] : motif.edges()) edges.push_back({a + 1, b + 1});
  return {{"vertices", motif.vertices()}, {"edges", edges}};
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + path.string() + "'");
  f << content;
}

}  // namespace ldpustat::cli
