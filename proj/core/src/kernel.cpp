#include "ldpustat/kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "ldpustat/errors.hpp"
#include "ldpustat/parallel.hpp"
#include "ldpustat/random.hpp"

namespace ldpustat {

namespace {

constexpr double kBreakpointTol = 1e-14;

void validate_breakpoints(const std::vector<double>& b, std::size_t blocks) {
  if (b.size() != blocks + 1) throw InvalidArgument("StepKernel: need blocks+1 breakpoints");
  if (b.front() != 0.0 || b.back() != 1.0) throw InvalidArgument("StepKernel: breakpoints must span [0, 1]");
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    if (!(b[i] < b[i + 1])) throw InvalidArgument("StepKernel: breakpoints must be strictly increasing");
}

std::vector<double> uniform_breakpoints(std::size_t m) {
  std::vector<double> b(m + 1);
  for (std::size_t i = 0; i <= m; ++i) b[i] = static_cast<double>(i) / static_cast<double>(m);
  b[m] = 1.0;
  return b;
}

// Best rectangle sum for a weighted matrix, exhaustive over row subsets in Gray-code order.
double cut_norm_weighted_exact(const Matrix& a) {
  const std::size_t m = a.rows();
  std::vector<double> col(m, 0.0);
  std::vector<bool> in(m, false);
  double best = 0.0;
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t g = 1; g < total; ++g) {
    const std::size_t bit = static_cast<std::size_t>(std::countr_zero(g));
    in[bit] = !in[bit];
    if ((g & 4095u) == 0) {
      // Periodic exact recomputation bounds the accumulated rounding of the updates.
      std::fill(col.begin(), col.end(), 0.0);
      for (std::size_t i = 0; i < m; ++i)
        if (in[i])
          for (std::size_t j = 0; j < m; ++j) col[j] += a(i, j);
    } else {
      const double sign = in[bit] ? 1.0 : -1.0;
      const auto row = a.row(bit);
      for (std::size_t j = 0; j < m; ++j) col[j] += sign * row[j];
    }
    double pos = 0.0, neg = 0.0;
    for (double c : col) (c > 0 ? pos : neg) += c;
    best = std::max({best, pos, -neg});
  }
  return best;
}

// One alternating best-response ascent for sign * sum_{S x T} a, from the row set `rows`.
double alternate_improve(const Matrix& a, std::vector<char> rows, double sign) {
  const std::size_t m = a.rows();
  std::vector<double> col(m), rsum(m);
  std::vector<char> cols(m);
  double best = -1.0;
  for (int iter = 0; iter < 1000; ++iter) {
    std::fill(col.begin(), col.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (rows[i]) {
        const auto row = a.row(i);
        for (std::size_t j = 0; j < m; ++j) col[j] += row[j];
      }
    for (std::size_t j = 0; j < m; ++j) cols[j] = sign * col[j] > 0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = a.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (cols[j]) s += row[j];
      rsum[i] = s;
    }
    double value = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      rows[i] = sign * rsum[i] > 0;
      if (rows[i]) value += rsum[i];
    }
    value = sign * value;
    if (value <= best) break;
    best = value;
  }
  return std::max(best, 0.0);
}

double cut_norm_weighted_heuristic(const Matrix& a, std::size_t restarts, std::uint64_t seed) {
  const std::size_t m = a.rows();
  restarts = std::max<std::size_t>(restarts, 1);
  std::vector<double> results(restarts, 0.0);
  parallel_for(restarts, [&](std::size_t r) {
    std::vector<char> rows(m, 1);
    if (r > 0) {
      Rng rng(derive_seed(seed, r));
      for (auto& x : rows) x = rng.bernoulli(0.5);
    }
    results[r] = std::max(alternate_improve(a, rows, 1.0), alternate_improve(a, rows, -1.0));
  });
  return *std::max_element(results.begin(), results.end());
}

double cut_norm_weighted(const Matrix& a, const CutOptions& options, bool* exact) {
  const bool use_exact = a.rows() <= options.exact_limit;
  if (exact) *exact = use_exact;
  return use_exact ? cut_norm_weighted_exact(a) : cut_norm_weighted_heuristic(a, options.restarts, options.seed);
}

}  // namespace

double StepFunction::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < blocks(); ++i) s += width(i) * values[i];
  return s;
}

double StepFunction::lp_norm(double r) const {
  if (r < 1.0) throw InvalidArgument("lp_norm: exponent must be >= 1");
  double top = 0.0;
  for (double v : values) top = std::max(top, std::abs(v));
  if (std::isinf(r) || top == 0.0) return top;
  double s = 0.0;
  for (std::size_t i = 0; i < blocks(); ++i) s += width(i) * std::pow(std::abs(values[i]) / top, r);
  return top * std::pow(s, 1.0 / r);
}

double StepFunction::tail_mean(double power, double cutoff) const {
  double s = 0.0;
  for (std::size_t i = 0; i < blocks(); ++i) {
    const double x = std::pow(std::abs(values[i]), power);
    if (x > cutoff) s += width(i) * x;
  }
  return s;
}

StepKernel::StepKernel(std::vector<double> breakpoints, Matrix values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.rows() == 0 || values_.rows() != values_.cols())
    throw InvalidArgument("StepKernel: values must be a non-empty square matrix");
  validate_breakpoints(breakpoints_, values_.rows());
  if (!values_.is_symmetric()) throw InvalidArgument("StepKernel: values must be symmetric");
  for (double v : values_.data())
    if (!std::isfinite(v)) throw InvalidArgument("StepKernel: non-finite value");
}

StepKernel StepKernel::uniform(Matrix values) {
  const std::size_t m = values.rows();
  return StepKernel(uniform_breakpoints(m), std::move(values));
}

StepKernel StepKernel::constant(double c) { return uniform(Matrix(1, 1, c)); }

std::vector<double> StepKernel::widths() const {
  std::vector<double> w(blocks());
  for (std::size_t i = 0; i < blocks(); ++i) w[i] = width(i);
  return w;
}

std::size_t StepKernel::block_of(double x) const {
  if (x <= 0.0) return 0;
  if (x >= 1.0) return blocks() - 1;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return std::min<std::size_t>(static_cast<std::size_t>(it - breakpoints_.begin()) - 1, blocks() - 1);
}

StepKernel StepKernel::refine(const std::vector<double>& breakpoints) const {
  const std::size_t m = breakpoints.size() - 1;
  std::vector<std::size_t> owner(m);
  for (std::size_t i = 0; i < m; ++i) owner[i] = block_of(0.5 * (breakpoints[i] + breakpoints[i + 1]));
  for (double b : breakpoints_) {
    const bool present = std::any_of(breakpoints.begin(), breakpoints.end(),
                                     [&](double x) { return std::abs(x - b) <= kBreakpointTol; });
    if (!present) throw InvalidArgument("StepKernel::refine: target partition is not a refinement");
  }
  Matrix v(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) v(i, j) = values_(owner[i], owner[j]);
  return StepKernel(breakpoints, std::move(v));
}

StepKernel StepKernel::permuted(std::span<const std::size_t> perm) const {
  const std::size_t m = blocks();
  if (perm.size() != m) throw InvalidArgument("StepKernel::permuted: permutation size mismatch");
  std::vector<bool> hit(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (perm[i] >= m || hit[perm[i]]) throw InvalidArgument("StepKernel::permuted: not a permutation");
    hit[perm[i]] = true;
    if (std::abs(width(i) - width(perm[i])) > 1e-12)
      throw InvalidArgument("StepKernel::permuted: permutation must preserve block widths");
  }
  Matrix v(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) v(i, j) = values_(perm[i], perm[j]);
  return StepKernel(breakpoints_, std::move(v));
}

Matrix StepKernel::weighted_values() const {
  const std::size_t m = blocks();
  Matrix a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = values_(i, j) * area(i, j);
  return a;
}

std::vector<double> common_refinement(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double x : all)
    if (out.empty() || x - out.back() > kBreakpointTol) out.push_back(x);
  out.front() = 0.0;
  out.back() = 1.0;
  return out;
}

StepKernel difference(const StepKernel& a, const StepKernel& b) {
  const auto bp = common_refinement(a.breakpoints(), b.breakpoints());
  const StepKernel ra = a.refine(bp), rb = b.refine(bp);
  Matrix v = ra.values();
  for (std::size_t k = 0; k < v.data().size(); ++k) v.data()[k] -= rb.values().data()[k];
  return StepKernel(bp, std::move(v));
}

StepKernel embed_matrix(const SymmetricMatrix& q) { return StepKernel::uniform(q.dense()); }

SymmetricMatrix scaled_adjacency(const SymmetricMatrix& adjacency) {
  const std::size_t n = adjacency.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double g = adjacency(i, j);
      if (g != 0.0 && g != 1.0) throw InvalidArgument("scaled_adjacency: entries must be 0 or 1");
      if (i == j && g != 0.0) throw InvalidArgument("scaled_adjacency: diagonal must be zero");
      total += g;
    }
  if (total == 0.0) throw DegenerateInput("scaled_adjacency: graph has no edges");
  const double norm = total / (static_cast<double>(n) * static_cast<double>(n));
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = adjacency(i, j) / norm;
  return SymmetricMatrix(std::move(out));
}

double cut_norm_exact(const StepKernel& w, std::size_t max_blocks) {
  if (w.blocks() > max_blocks || w.blocks() > 62)
    throw LimitExceeded("cut_norm_exact: " + std::to_string(w.blocks()) + " blocks exceeds the exhaustive limit of " +
                        std::to_string(max_blocks) + "; use cut_norm_heuristic");
  return cut_norm_weighted_exact(w.weighted_values());
}

double cut_norm_heuristic(const StepKernel& w, std::size_t restarts, std::uint64_t seed) {
  return cut_norm_weighted_heuristic(w.weighted_values(), restarts, seed);
}

CutEstimate cut_distance(const StepKernel& a, const StepKernel& b, const CutOptions& options) {
  CutEstimate out;
  out.value = cut_norm_weighted(difference(a, b).weighted_values(), options, &out.exact);
  return out;
}

namespace {

double permuted_gap(const Matrix& a, const Matrix& b, const std::vector<std::size_t>& perm, const CutOptions& cut,
                    bool* exact) {
  const std::size_t m = a.rows();
  Matrix d(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) d(i, j) = a(perm[i], perm[j]) - b(i, j);
  return cut_norm_weighted(d, cut, exact);
}

}  // namespace

WeakCutResult weak_cut_distance(const StepKernel& a, const StepKernel& b, const WeakCutBudget& budget) {
  const auto bp = common_refinement(a.breakpoints(), b.breakpoints());
  const StepKernel ra = a.refine(bp), rb = b.refine(bp);
  const Matrix wa = ra.weighted_values(), wb = rb.weighted_values();
  const std::size_t m = ra.blocks();

  // Width classes: a block may only move onto a block of the same width.
  std::vector<std::size_t> cls(m);
  {
    std::vector<double> reps;
    for (std::size_t i = 0; i < m; ++i) {
      const double w = ra.width(i);
      auto it = std::find_if(reps.begin(), reps.end(), [&](double r) { return std::abs(r - w) <= 1e-12; });
      cls[i] = static_cast<std::size_t>(it - reps.begin());
      if (it == reps.end()) reps.push_back(w);
    }
  }
  const auto preserves = [&](const std::vector<std::size_t>& p) {
    for (std::size_t i = 0; i < m; ++i)
      if (cls[i] != cls[p[i]]) return false;
    return true;
  };

  WeakCutResult best;
  best.permutation.resize(m);
  std::iota(best.permutation.begin(), best.permutation.end(), 0);
  bool exact_eval = false;
  best.value = permuted_gap(wa, wb, best.permutation, budget.cut, &exact_eval);

  if (m <= budget.exhaustive_limit && !budget.force_annealing) {
    std::vector<std::size_t> p = best.permutation;
    bool all_exact = exact_eval;
    while (std::next_permutation(p.begin(), p.end())) {
      if (!preserves(p)) continue;
      bool e = false;
      const double d = permuted_gap(wa, wb, p, budget.cut, &e);
      all_exact = all_exact && e;
      if (d < best.value) {
        best.value = d;
        best.permutation = p;
      }
    }
    best.certified_exact = all_exact;
    return best;
  }

  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < m; ++i) {
    if (cls[i] >= members.size()) members.resize(cls[i] + 1);
    members[cls[i]].push_back(i);
  }
  std::vector<std::size_t> movable;
  for (std::size_t c = 0; c < members.size(); ++c)
    if (members[c].size() >= 2) movable.push_back(c);
  if (movable.empty() || best.value == 0.0) {
    best.certified_exact = movable.empty() && exact_eval;
    return best;
  }

  const std::size_t restarts = std::max<std::size_t>(budget.anneal_restarts, 1);
  std::vector<WeakCutResult> runs(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    Rng rng(derive_seed(budget.seed, r));
    std::vector<std::size_t> p(m);
    std::iota(p.begin(), p.end(), 0);
    if (r > 0)
      for (const auto& mem : members)
        for (std::size_t k = mem.size(); k > 1; --k) std::swap(p[mem[k - 1]], p[mem[rng.below(k)]]);
    double energy = permuted_gap(wa, wb, p, budget.cut, nullptr);
    WeakCutResult local{energy, false, p};
    const double t0 = 0.25 * std::max(energy, best.value) + 1e-300;
    for (std::size_t step = 0; step < budget.anneal_steps; ++step) {
      const double frac = 1.0 - static_cast<double>(step) / static_cast<double>(budget.anneal_steps);
      const double temp = t0 * frac * frac + 1e-300;
      const auto& mem = members[movable[rng.below(movable.size())]];
      const std::size_t ii = rng.below(mem.size());
      std::size_t jj = rng.below(mem.size() - 1);
      if (jj >= ii) ++jj;
      const std::size_t i = mem[ii], j = mem[jj];
      std::swap(p[i], p[j]);
      const double proposed = permuted_gap(wa, wb, p, budget.cut, nullptr);
      const double delta = proposed - energy;
      if (delta <= 0.0 || rng.uniform() < std::exp(-delta / temp)) {
        energy = proposed;
        if (energy < local.value) {
          local.value = energy;
          local.permutation = p;
        }
      } else {
        std::swap(p[i], p[j]);
      }
    }
    runs[r] = std::move(local);
  });
  for (auto& run : runs)
    if (run.value < best.value) best = run;
  // Re-evaluate the winner with the reporting policy so the value is reproducible.
  best.value = permuted_gap(wa, wb, best.permutation, budget.cut, nullptr);
  best.certified_exact = false;
  return best;
}

double lp_norm(const StepKernel& w, double r) {
  if (!(r >= 1.0)) throw InvalidArgument("lp_norm: exponent must be >= 1");
  const std::size_t m = w.blocks();
  double top = 0.0;
  for (double v : w.values().data()) top = std::max(top, std::abs(v));
  if (std::isinf(r) || top == 0.0) return top;
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) s += w.area(i, j) * std::pow(std::abs(w.value(i, j)) / top, r);
  return top * std::pow(s, 1.0 / r);
}

StepFunction degree_profile(const StepKernel& w) {
  const std::size_t m = w.blocks();
  StepFunction out{w.breakpoints(), std::vector<double>(m, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += std::abs(w.value(i, j)) * w.width(j);
    out.values[i] = s;
  }
  return out;
}

namespace {

DegreeStats degree_stats(const StepKernel& w, std::size_t vertices, double cutoff) {
  const StepFunction r = degree_profile(w);
  const double power = static_cast<double>(vertices - 1);
  DegreeStats s;
  s.mean = r.integral();
  double mp = 0.0;
  for (std::size_t i = 0; i < r.blocks(); ++i) mp += r.width(i) * std::pow(r.values[i], power);
  s.mean_power = mp;
  s.sup = r.lp_norm(kInfinity);
  s.ui_tail = r.tail_mean(power, cutoff);
  return s;
}

}  // namespace

AssumptionReport check_assumptions(const StepKernel& wn, const StepKernel& w, const Motif& motif, double p, double q,
                                   const AssumptionThresholds& t) {
  if (!(p >= 1.0)) throw InvalidArgument("check_assumptions: p must be >= 1");
  if (!(q > 1.0)) throw InvalidArgument("check_assumptions: q must be > 1");
  const double inv = (std::isinf(p) ? 0.0 : 1.0 / p) + (std::isinf(q) ? 0.0 : 1.0 / q);
  if (inv > 1.0 + 1e-12) throw InvalidArgument("check_assumptions: need 1/p + 1/q <= 1");

  AssumptionReport rep;
  rep.p = p;
  rep.q = q;
  rep.motif_vertices = motif.vertices();
  rep.motif_max_degree = motif.max_degree();
  rep.q_delta = q * static_cast<double>(motif.max_degree());
  for (double r : {1.0, rep.q_delta, kInfinity}) {
    rep.norms_wn[r] = lp_norm(wn, r);
    rep.norms_w[r] = lp_norm(w, r);
  }
  rep.degree_wn = degree_stats(wn, motif.vertices(), t.ui_cutoff);
  rep.degree_w = degree_stats(w, motif.vertices(), t.ui_cutoff);

  rep.holder_pq = true;
  rep.q_moment = rep.norms_wn[rep.q_delta] <= t.norm_bound && rep.norms_w[rep.q_delta] <= t.norm_bound;
  rep.sup_bounded = rep.norms_wn[kInfinity] <= t.norm_bound;
  rep.degree_l1 = rep.degree_wn.mean <= t.degree_bound && rep.degree_w.mean <= t.degree_bound;
  rep.degree_ui = rep.degree_wn.ui_tail <= t.ui_tolerance && rep.degree_w.mean_power <= t.degree_bound;
  rep.degree_sup = rep.degree_wn.sup <= t.degree_bound && rep.degree_w.sup <= t.degree_bound;
  rep.applicable_edge = motif.is_edge();
  rep.applicable_star = motif.is_star();
  rep.applicable_tree = motif.is_tree();
  return rep;
}

}  // namespace ldpustat
