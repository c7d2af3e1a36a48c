#include "cli/inputs.hpp"

#include <filesystem>

#include "ldpustat/errors.hpp"
#include "ldpustat/io.hpp"

namespace ldpustat::cli {

namespace {

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (...) {
    throw InvalidArgument("cannot parse '" + s + "' as a number");
  }
  if (pos != s.size()) throw InvalidArgument("cannot parse '" + s + "' as a number");
  return v;
}

}  // namespace

Motif load_motif(const std::string& spec) {
  if (std::filesystem::exists(spec)) return Motif::parse(read_text_file(spec));
  try {
    return Motif::builtin(spec);
  } catch (const InvalidArgument&) {
    throw InvalidArgument("motif '" + spec + "' is neither a builtin name nor a readable file");
  }
}

FiniteBaseMeasure load_mu(const std::string& spec) {
  if (spec.rfind("csv:", 0) == 0) return parse_measure_csv(read_text_file(spec.substr(4)));
  return FiniteBaseMeasure::builtin(spec);
}

PhiKernel load_phi(const std::string& spec, std::size_t arity, const FiniteBaseMeasure& mu) {
  if (spec == "product") return PhiKernel::product(arity, mu.atoms());
  if (spec == "monochrome") return PhiKernel::monochrome(arity, mu.size());
  if (spec.rfind("table:", 0) == 0) {
    PhiKernel phi = parse_phi_table_csv(read_text_file(spec.substr(6)));
    if (phi.arity() != arity)
      throw InvalidArgument("phi table has arity " + std::to_string(phi.arity()) + " but the motif has " +
                            std::to_string(arity) + " vertices");
    return phi;
  }
  throw InvalidArgument("unknown phi '" + spec + "' (expected product, monochrome or table:PATH)");
}

StepKernel load_kernel(const std::string& path) { return parse_kernel_csv(read_text_file(path)); }

SymmetricMatrix load_matrix(const std::string& path) { return parse_symmetric_csv(read_text_file(path)); }

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const auto parts = split_list(spec, ':');
    if (parts.size() != 3) throw InvalidArgument("grid range must look like start:stop:count");
    const double a = to_double(parts[0]), b = to_double(parts[1]);
    const double count = to_double(parts[2]);
    if (count < 2 || count != static_cast<double>(static_cast<std::size_t>(count)))
      throw InvalidArgument("grid count must be an integer >= 2");
    const auto m = static_cast<std::size_t>(count);
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
    g.back() = b;
    return g;
  }
  std::vector<double> g;
  for (const auto& s : split_list(spec, ',')) g.push_back(to_double(s));
  return g;
}

std::vector<std::size_t> parse_size_list(const std::string& spec) {
  std::vector<std::size_t> out;
  for (const auto& s : split_list(spec, ',')) {
    const double v = to_double(s);
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw InvalidArgument("'" + s + "' is not a positive integer");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

double parse_extended(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinity;
  return to_double(text);
}

VariationalProblem make_problem(const RunConfig& cfg) {
  const Family family = parse_family(cfg.family);
  std::string mu_spec = cfg.mu;
  if (mu_spec.empty()) mu_spec = family == Family::multilinear ? "rademacher" : "uniform:" + std::to_string(cfg.c);
  VariationalProblem problem{family, load_motif(cfg.motif),
                             cfg.w.empty() ? StepKernel::constant(1.0) : load_kernel(cfg.w), load_mu(mu_spec),
                             std::nullopt};
  if (family == Family::generic)
    problem.phi = load_phi(cfg.phi.empty() ? "product" : cfg.phi, problem.motif.vertices(), problem.mu);
  else if (!cfg.phi.empty())
    throw InvalidArgument("--phi only applies to --family generic");
  return problem;
}

}  // namespace ldpustat::cli
