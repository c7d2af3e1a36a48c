#include "ldpustat/ustat.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "ldpustat/contraction.hpp"
#include "ldpustat/errors.hpp"
#include "ldpustat/parallel.hpp"

namespace ldpustat {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kParallelWork = 1 << 20;

void check(const Motif& h, const SymmetricMatrix& q, const DataVector& x, const PhiKernel& phi) {
  if (phi.arity() != h.vertices())
    throw InvalidArgument("phi arity " + std::to_string(phi.arity()) + " does not match motif with " +
                          std::to_string(h.vertices()) + " vertices");
  if (q.size() != x.size())
    throw InvalidArgument("coupling is " + std::to_string(q.size()) + "x" + std::to_string(q.size()) +
                          " but data has " + std::to_string(x.size()) + " entries");
  x.validate(phi.atom_count());
}

// Enumerates index tuples level by level, multiplying in the coupling of every edge back to
// an earlier level as soon as both ends are fixed.
struct TupleSum {
  const Motif& h;
  const SymmetricMatrix& q;
  const PhiKernel& phi;
  const DataVector& x;
  bool distinct = false;
  // Optional pinning: level `pin_level` is fixed to `site` with atom `site_atom`; for the V
  // variant, levels below it must avoid `site` so that each tuple is counted once.
  std::size_t pin_level = kNone;
  std::size_t site = kNone;
  std::size_t site_atom = 0;

  std::vector<std::vector<std::size_t>> before;
  std::vector<std::size_t> idx;
  std::vector<std::size_t> atoms;
  std::vector<char> used;

  TupleSum(const Motif& h_, const SymmetricMatrix& q_, const PhiKernel& phi_, const DataVector& x_)
      : h(h_), q(q_), phi(phi_), x(x_), before(h_.vertices()), idx(h_.vertices()), atoms(h_.vertices()),
        used(x_.size(), 0) {
    for (auto [a, b] : h.edges()) {
      if (a > b) std::swap(a, b);
      before[b].push_back(a);
    }
  }

  std::size_t atom_of(std::size_t i) const { return i == site ? site_atom : x[i]; }

  void place(std::size_t level, std::size_t i) {
    idx[level] = i;
    atoms[level] = atom_of(i);
    if (distinct) used[i] = 1;
  }
  void unplace(std::size_t i) {
    if (distinct) used[i] = 0;
  }

  double edge_factor(std::size_t level, std::size_t i) const {
    double p = 1.0;
    for (std::size_t b : before[level]) p *= q.coupling(idx[b], i);
    return p;
  }

  double run(std::size_t level, double partial) {
    if (level == idx.size()) return partial * phi(atoms);
    if (level == pin_level) {
      const double p = partial * edge_factor(level, site);
      if (p == 0.0) return 0.0;
      place(level, site);
      const double s = run(level + 1, p);
      unplace(site);
      return s;
    }
    double total = 0.0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (distinct && used[i]) continue;
      if (i == site && (distinct || level < pin_level)) continue;
      const double p = partial * edge_factor(level, i);
      if (p == 0.0) continue;
      place(level, i);
      total += run(level + 1, p);
      unplace(i);
    }
    return total;
  }
};

double full_sum(const Motif& h, const SymmetricMatrix& q, const DataVector& x, const PhiKernel& phi,
                bool distinct) {
  const std::size_t n = x.size();
  std::vector<double> partial(n, 0.0);
  auto body = [&](std::size_t i0) {
    TupleSum e(h, q, phi, x);
    e.distinct = distinct;
    e.place(0, i0);
    partial[i0] = e.run(1, 1.0);
  };
  // Small sums stay on the calling thread; callers such as the enumerators parallelize above.
  if (std::pow(static_cast<double>(n), static_cast<double>(h.vertices())) < kParallelWork) {
    for (std::size_t i0 = 0; i0 < n; ++i0) body(i0);
  } else {
    parallel_for(n, body);
  }
  return pairwise_sum(partial.data(), n) / std::pow(static_cast<double>(n), static_cast<double>(h.vertices()));
}

}  // namespace

double v_statistic(const Motif& h, const SymmetricMatrix& q, const DataVector& x, const PhiKernel& phi) {
  check(h, q, x, phi);
  return full_sum(h, q, x, phi, false);
}

double u_statistic(const Motif& h, const SymmetricMatrix& q, const DataVector& x, const PhiKernel& phi) {
  check(h, q, x, phi);
  if (x.size() < h.vertices())
    throw InvalidArgument("u_statistic needs n >= v distinct indices (n = " + std::to_string(x.size()) +
                          ", v = " + std::to_string(h.vertices()) + ")");
  return full_sum(h, q, x, phi, true);
}

double v_statistic_tree(const Motif& h, const SymmetricMatrix& q, const DataVector& x, const PhiKernel& phi) {
  check(h, q, x, phi);
  if (!h.is_forest()) throw InvalidArgument("v_statistic_tree: motif is not a forest");
  if (!phi.separable()) throw InvalidArgument("v_statistic_tree: phi is not separable");
  const std::size_t n = x.size();
  const Matrix k = q.with_zero_diagonal().dense();
  const std::vector<double> weight(n, 1.0 / static_cast<double>(n));
  double total = 0.0;
  for (const auto& g : phi.channels()) {
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = g[x[i]];
    total += motif_sum(h, k, weight, std::vector<std::vector<double>>(h.vertices(), f));
  }
  return total;
}

double uv_gap(const Motif& h, const SymmetricMatrix& q, const DataVector& x, const PhiKernel& phi) {
  return std::abs(u_statistic(h, q, x, phi) - v_statistic(h, q, x, phi));
}

double statistic(Statistic kind, const Motif& h, const SymmetricMatrix& q, const DataVector& x,
                 const PhiKernel& phi) {
  return kind == Statistic::u ? u_statistic(h, q, x, phi) : v_statistic(h, q, x, phi);
}

std::vector<double> local_field(const Motif& h, const SymmetricMatrix& q, const DataVector& x,
                                const PhiKernel& phi, std::size_t site, Statistic kind) {
  check(h, q, x, phi);
  const std::size_t n = x.size();
  if (site >= n) throw InvalidArgument("local_field: site out of range");
  const double scale = std::pow(static_cast<double>(n), 1.0 - static_cast<double>(h.vertices()));
  std::vector<double> field(phi.atom_count(), 0.0);
  for (std::size_t a = 0; a < phi.atom_count(); ++a) {
    double total = 0.0;
    for (std::size_t level = 0; level < h.vertices(); ++level) {
      TupleSum e(h, q, phi, x);
      e.distinct = kind == Statistic::u;
      e.pin_level = level;
      e.site = site;
      e.site_atom = a;
      total += e.run(0, 1.0);
    }
    field[a] = total * scale;
  }
  return field;
}

}  // namespace ldpustat
