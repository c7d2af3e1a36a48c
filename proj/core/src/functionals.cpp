#include "ldpustat/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ldpustat/contraction.hpp"
#include "ldpustat/errors.hpp"

namespace ldpustat {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void check_blocks(const StepKernel& w, std::size_t blocks, const char* where) {
  if (blocks != w.blocks())
    throw InvalidArgument(std::string(where) + ": profile has " + std::to_string(blocks) +
                          " blocks but the kernel has " + std::to_string(w.blocks()));
}

std::vector<double> column(const Matrix& a, std::size_t c) {
  std::vector<double> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = a(i, c);
  return out;
}

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t limit, const char* where) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > limit / std::max<std::size_t>(base, 1))
      throw LimitExceeded(std::string(where) + ": " + std::to_string(base) + "^" + std::to_string(exp) +
                          " atom tuples exceed the table limit of " + std::to_string(limit));
    out *= base;
  }
  return out;
}

// Tabulated phi over [k]^v, first index slowest.
std::vector<double> tabulate_phi(const PhiKernel& phi, std::size_t size) {
  const std::size_t v = phi.arity(), k = phi.atom_count();
  std::vector<double> table(size);
  std::vector<std::size_t> idx(v, 0);
  for (std::size_t pos = 0; pos < size; ++pos) {
    table[pos] = phi(idx);
    for (std::size_t a = v; a-- > 0;) {
      if (++idx[a] < k) break;
      idx[a] = 0;
    }
  }
  return table;
}

// Sum over atom tuples of phi * prod_{b != skip} rows[b][x_b], binned by x_skip (or a single
// bin when skip == kNone).
std::vector<double> contract(const std::vector<double>& table, std::size_t v, std::size_t k,
                             const std::vector<std::span<const double>>& rows, std::size_t skip) {
  std::vector<double> out(skip == kNone ? 1 : k, 0.0);
  std::vector<std::size_t> idx(v, 0);
  for (std::size_t pos = 0; pos < table.size(); ++pos) {
    double p = table[pos];
    for (std::size_t b = 0; b < v && p != 0.0; ++b)
      if (b != skip) p *= rows[b][idx[b]];
    out[skip == kNone ? 0 : idx[skip]] += p;
    for (std::size_t a = v; a-- > 0;) {
      if (++idx[a] < k) break;
      idx[a] = 0;
    }
  }
  return out;
}

// Visits block tuples with their weight prod widths * prod W (zero weights skipped).
template <class Visit>
void for_each_block_tuple(const Motif& h, const StepKernel& w, Visit&& visit) {
  const std::size_t v = h.vertices(), m = w.blocks();
  std::vector<std::vector<std::size_t>> before(v);
  for (auto [a, b] : h.edges()) {
    if (a > b) std::swap(a, b);
    before[b].push_back(a);
  }
  std::vector<std::size_t> u(v, 0);
  std::vector<double> partial(v + 1, 1.0);
  std::size_t level = 0;
  u[0] = 0;
  // Iterative depth-first walk; u[level] is the candidate at the current level.
  while (true) {
    if (u[level] < m) {
      double p = partial[level] * w.width(u[level]);
      for (std::size_t b : before[level]) p *= w.value(u[b], u[level]);
      if (p != 0.0) {
        if (level + 1 == v) {
          visit(u, p);
        } else {
          partial[level + 1] = p;
          ++level;
          u[level] = 0;
          continue;
        }
      }
      ++u[level];
    } else {
      if (level == 0) break;
      --level;
      ++u[level];
    }
  }
}

}  // namespace

void BlockMeasure::validate() const {
  if (widths.size() != rows.rows()) throw InvalidArgument("BlockMeasure: widths/rows mismatch");
  double total = 0.0;
  for (double x : widths) {
    if (!(x > 0.0)) throw InvalidArgument("BlockMeasure: block widths must be positive");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("BlockMeasure: widths must sum to 1");
  for (std::size_t u = 0; u < rows.rows(); ++u) {
    double s = 0.0;
    for (double p : rows.row(u)) {
      if (!(p >= 0.0)) throw InvalidArgument("BlockMeasure: negative probability in row " + std::to_string(u));
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) throw InvalidArgument("BlockMeasure: row " + std::to_string(u) + " does not sum to 1");
  }
}

BlockMeasure product_measure(const std::vector<double>& widths, const FiniteBaseMeasure& mu) {
  BlockMeasure nu{widths, Matrix(widths.size(), mu.size())};
  for (std::size_t u = 0; u < widths.size(); ++u)
    for (std::size_t x = 0; x < mu.size(); ++x) nu.rows(u, x) = mu.prob(x);
  return nu;
}

double t_motif(const Motif& h, const StepKernel& w, const std::vector<std::vector<double>>& f) {
  const auto widths = w.widths();
  return motif_sum(h, w.values(), widths, f);
}

double t_motif_bruteforce(const Motif& h, const StepKernel& w, const std::vector<std::vector<double>>& f) {
  const auto widths = w.widths();
  return motif_sum_bruteforce(h, w.values(), widths, f);
}

double t_functional(const Motif& h, const StepKernel& w, const BlockMeasure& nu, const PhiKernel& phi,
                    std::size_t table_limit) {
  if (phi.arity() != h.vertices()) throw InvalidArgument("t_functional: phi arity does not match motif");
  if (nu.atoms() != phi.atom_count()) throw InvalidArgument("t_functional: measure and phi use different atom counts");
  check_blocks(w, nu.blocks(), "t_functional");
  const std::size_t v = h.vertices(), k = phi.atom_count();
  if (phi.separable()) {
    double total = 0.0;
    for (const auto& g : phi.channels()) {
      std::vector<double> f(nu.blocks(), 0.0);
      for (std::size_t u = 0; u < nu.blocks(); ++u)
        for (std::size_t x = 0; x < k; ++x) f[u] += nu.rows(u, x) * g[x];
      total += t_motif(h, w, std::vector<std::vector<double>>(v, f));
    }
    return total;
  }
  const auto table = tabulate_phi(phi, checked_power(k, v, table_limit, "t_functional"));
  double total = 0.0;
  std::vector<std::span<const double>> rows(v);
  for_each_block_tuple(h, w, [&](const std::vector<std::size_t>& u, double weight) {
    for (std::size_t a = 0; a < v; ++a) rows[a] = nu.rows.row(u[a]);
    total += weight * contract(table, v, k, rows, kNone)[0];
  });
  return total;
}

Matrix t_functional_gradient(const Motif& h, const StepKernel& w, const BlockMeasure& nu, const PhiKernel& phi,
                             std::size_t table_limit) {
  if (phi.arity() != h.vertices()) throw InvalidArgument("t_functional_gradient: phi arity does not match motif");
  if (nu.atoms() != phi.atom_count())
    throw InvalidArgument("t_functional_gradient: measure and phi use different atom counts");
  check_blocks(w, nu.blocks(), "t_functional_gradient");
  const std::size_t v = h.vertices(), k = phi.atom_count(), m = nu.blocks();
  Matrix grad(m, k, 0.0);
  if (phi.separable()) {
    const auto widths = w.widths();
    for (const auto& g : phi.channels()) {
      std::vector<double> f(m, 0.0);
      for (std::size_t u = 0; u < m; ++u)
        for (std::size_t x = 0; x < k; ++x) f[u] += nu.rows(u, x) * g[x];
      const auto dg = motif_gradient(h, w.values(), widths, f);
      for (std::size_t u = 0; u < m; ++u)
        for (std::size_t x = 0; x < k; ++x) grad(u, x) += g[x] * dg[u];
    }
    return grad;
  }
  const auto table = tabulate_phi(phi, checked_power(k, v, table_limit, "t_functional_gradient"));
  std::vector<std::span<const double>> rows(v);
  for_each_block_tuple(h, w, [&](const std::vector<std::size_t>& u, double weight) {
    for (std::size_t a = 0; a < v; ++a) rows[a] = nu.rows.row(u[a]);
    for (std::size_t a = 0; a < v; ++a) {
      const auto part = contract(table, v, k, rows, a);
      const double scale = weight / w.width(u[a]);
      for (std::size_t x = 0; x < k; ++x) grad(u[a], x) += scale * part[x];
    }
  });
  return grad;
}

double g1(const Motif& h, const StepKernel& w, const RealProfile& f) {
  check_blocks(w, f.size(), "g1");
  return t_motif(h, w, std::vector<std::vector<double>>(h.vertices(), f));
}

double g2(const Motif& h, const StepKernel& w, const PottsProfile& f) {
  check_blocks(w, f.rows(), "g2");
  validate_potts_profile(f, f.cols());
  double total = 0.0;
  for (std::size_t r = 0; r < f.cols(); ++r)
    total += t_motif(h, w, std::vector<std::vector<double>>(h.vertices(), column(f, r)));
  return total;
}

std::vector<double> g1_gradient(const Motif& h, const StepKernel& w, const RealProfile& f) {
  check_blocks(w, f.size(), "g1_gradient");
  const auto widths = w.widths();
  return motif_gradient(h, w.values(), widths, f);
}

Matrix g2_gradient(const Motif& h, const StepKernel& w, const PottsProfile& f) {
  check_blocks(w, f.rows(), "g2_gradient");
  const auto widths = w.widths();
  Matrix grad(f.rows(), f.cols());
  for (std::size_t r = 0; r < f.cols(); ++r) {
    const auto g = motif_gradient(h, w.values(), widths, column(f, r));
    for (std::size_t u = 0; u < f.rows(); ++u) grad(u, r) = g[u];
  }
  return grad;
}

BlockMeasure lift_xi1(const FiniteBaseMeasure& mu, const std::vector<double>& widths, const RealProfile& f,
                      const TiltSolverConfig& cfg) {
  if (widths.size() != f.size()) throw InvalidArgument("lift_xi1: profile and widths differ in length");
  const double lo = mu.min_atom(), hi = mu.max_atom(), slack = cfg.boundary_margin * (hi - lo);
  BlockMeasure nu{widths, Matrix(f.size(), mu.size(), 0.0)};
  for (std::size_t u = 0; u < f.size(); ++u) {
    double m = f[u];
    if (!(m >= lo - slack && m <= hi + slack))
      throw InvalidArgument("lift_xi1: profile value " + std::to_string(m) + " outside [min atom, max atom]");
    m = std::clamp(m, lo, hi);
    if (m == hi) {
      nu.rows(u, mu.argmax()) = 1.0;
    } else if (m == lo) {
      nu.rows(u, mu.argmin()) = 1.0;
    } else {
      const auto p = tilted_probs(mu, inverse_mean(mu, m, cfg));
      for (std::size_t x = 0; x < mu.size(); ++x) nu.rows(u, x) = p[x];
    }
  }
  return nu;
}

BlockMeasure lift_xi2(const std::vector<double>& widths, const PottsProfile& f) {
  if (widths.size() != f.rows()) throw InvalidArgument("lift_xi2: profile and widths differ in length");
  validate_potts_profile(f, f.cols());
  return BlockMeasure{widths, f};
}

double divergence(const BlockMeasure& nu, const FiniteBaseMeasure& mu) {
  if (nu.atoms() != mu.size()) throw InvalidArgument("divergence: measure and base use different atom counts");
  double total = 0.0;
  for (std::size_t u = 0; u < nu.blocks(); ++u) {
    const auto row = nu.rows.row(u);
    total += nu.widths[u] * kl_divergence(std::vector<double>(row.begin(), row.end()), mu.probs());
  }
  return total;
}

double gamma_integral(const FiniteBaseMeasure& mu, const std::vector<double>& widths, const RealProfile& f,
                      const TiltSolverConfig& cfg) {
  if (widths.size() != f.size()) throw InvalidArgument("gamma_integral: profile and widths differ in length");
  const double lo = mu.min_atom(), hi = mu.max_atom(), slack = cfg.boundary_margin * (hi - lo);
  double total = 0.0;
  for (std::size_t u = 0; u < f.size(); ++u) {
    if (!(f[u] >= lo - slack && f[u] <= hi + slack))
      throw InvalidArgument("gamma_integral: profile value outside [min atom, max atom]");
    total += widths[u] * gamma(mu, std::clamp(f[u], lo, hi), cfg);
  }
  return total;
}

double potts_penalty(const FiniteBaseMeasure& mu, const std::vector<double>& widths, const PottsProfile& f) {
  if (widths.size() != f.rows()) throw InvalidArgument("potts_penalty: profile and widths differ in length");
  if (f.cols() != mu.size()) throw InvalidArgument("potts_penalty: profile and base use different color counts");
  double total = 0.0;
  for (std::size_t u = 0; u < f.rows(); ++u) {
    const auto row = f.row(u);
    total += widths[u] * kl_divergence(std::vector<double>(row.begin(), row.end()), mu.probs());
  }
  return total;
}

void validate_potts_profile(const PottsProfile& f, std::size_t colors) {
  if (f.cols() != colors) throw InvalidArgument("Potts profile has the wrong number of colors");
  for (std::size_t u = 0; u < f.rows(); ++u) {
    double s = 0.0;
    for (double p : f.row(u)) {
      if (!(p >= 0.0)) throw InvalidArgument("Potts profile: negative entry in block " + std::to_string(u));
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-12)
      throw InvalidArgument("Potts profile: block " + std::to_string(u) + " does not sum to 1");
  }
}

}  // namespace ldpustat
