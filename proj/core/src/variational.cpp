#include "ldpustat/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ldpustat/parallel.hpp"
#include "ldpustat/random.hpp"

namespace ldpustat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> uniform_breakpoints(std::size_t m) {
  std::vector<double> b(m + 1);
  for (std::size_t i = 0; i <= m; ++i) b[i] = static_cast<double>(i) / static_cast<double>(m);
  b[m] = 1.0;
  return b;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) r = std::max(r, std::abs(a.data()[i] - b.data()[i]));
  return r;
}

// The mean-field family seen through a common interface. Profiles are m x d matrices: d = 1
// (block means) for multilinear, d = number of atoms (block laws) otherwise.
class Model {
 public:
  Model(const VariationalProblem& p, const SolveConfig& cfg)
      : family_(p.family), h_(p.motif), w_(refined(p.w, cfg.blocks)), mu_(p.mu), phi_(p.phi), cfg_(cfg),
        widths_(w_.widths()) {
    if (family_ == Family::generic) {
      if (!phi_) throw InvalidArgument("generic family needs a phi kernel");
      if (phi_->arity() != h_.vertices()) throw InvalidArgument("phi arity does not match the motif");
      if (phi_->atom_count() != mu_.size()) throw InvalidArgument("phi and the base measure use different atoms");
    }
    if (family_ == Family::multilinear && mu_.size() < 2)
      throw InvalidArgument("multilinear family needs at least two atoms");
  }

  Family family() const { return family_; }
  std::size_t blocks() const { return w_.blocks(); }
  std::size_t dim() const { return family_ == Family::multilinear ? 1 : mu_.size(); }
  const std::vector<double>& widths() const { return widths_; }

  double statistic(const Matrix& x) const {
    switch (family_) {
      case Family::multilinear:
        return g1(h_, w_, x.data());
      case Family::potts: {
        double s = 0.0;
        for (std::size_t r = 0; r < x.cols(); ++r) {
          std::vector<double> col(x.rows());
          for (std::size_t u = 0; u < x.rows(); ++u) col[u] = x(u, r);
          s += t_motif(h_, w_, std::vector<std::vector<double>>(h_.vertices(), col));
        }
        return s;
      }
      case Family::generic:
        return t_functional(h_, w_, BlockMeasure{widths_, x}, *phi_, cfg_.table_limit);
    }
    return 0.0;
  }

  // Derivative density of the statistic, same layout as the profile.
  Matrix gradient(const Matrix& x) const {
    switch (family_) {
      case Family::multilinear:
        return Matrix(x.rows(), 1, g1_gradient(h_, w_, x.data()));
      case Family::potts:
        return g2_gradient(h_, w_, x);
      case Family::generic:
        return t_functional_gradient(h_, w_, BlockMeasure{widths_, x}, *phi_, cfg_.table_limit);
    }
    return {};
  }

  double penalty(const Matrix& x) const {
    if (family_ == Family::multilinear) return gamma_integral(mu_, widths_, x.data(), cfg_.tilt);
    return potts_penalty(mu_, widths_, x);
  }

  double objective(double theta, const Matrix& x) const {
    const double pen = penalty(x);
    return theta == 0.0 ? -pen : theta * statistic(x) - pen;
  }

  // Mean coordinates of the natural parameter eta: alpha'(eta) or softmax(log mu + eta).
  Matrix from_natural(const Matrix& eta) const {
    Matrix x(eta.rows(), eta.cols());
    if (family_ == Family::multilinear) {
      for (std::size_t u = 0; u < eta.rows(); ++u) x(u, 0) = mean_map(mu_, eta(u, 0));
      return x;
    }
    const std::size_t k = mu_.size();
    for (std::size_t u = 0; u < eta.rows(); ++u) {
      double shift = -kInf;
      for (std::size_t r = 0; r < k; ++r) shift = std::max(shift, eta(u, r) + std::log(mu_.prob(r)));
      double s = 0.0;
      for (std::size_t r = 0; r < k; ++r) {
        x(u, r) = std::exp(eta(u, r) + std::log(mu_.prob(r)) - shift);
        s += x(u, r);
      }
      for (std::size_t r = 0; r < k; ++r) x(u, r) /= s;
    }
    return x;
  }

  Matrix to_natural(const Matrix& x) const {
    Matrix eta(x.rows(), x.cols());
    if (family_ == Family::multilinear) {
      const double lo = mu_.min_atom(), hi = mu_.max_atom();
      const double eps = std::max(cfg_.tilt.boundary_margin, 1e-12) * (hi - lo);
      for (std::size_t u = 0; u < x.rows(); ++u)
        eta(u, 0) = inverse_mean(mu_, std::clamp(x(u, 0), lo + eps, hi - eps), cfg_.tilt);
      return eta;
    }
    for (std::size_t u = 0; u < x.rows(); ++u)
      for (std::size_t r = 0; r < x.cols(); ++r)
        eta(u, r) = std::log(std::max(x(u, r), 1e-300) / mu_.prob(r));
    return eta;
  }

  Matrix best_response(double theta, const Matrix& x) const {
    Matrix eta = gradient(x);
    for (double& e : eta.data()) e *= theta;
    return from_natural(eta);
  }

  // Keeps iterates inside the feasible set despite rounding.
  void normalize(Matrix& x) const {
    if (family_ == Family::multilinear) {
      for (double& v : x.data()) v = std::clamp(v, mu_.min_atom(), mu_.max_atom());
      return;
    }
    for (std::size_t u = 0; u < x.rows(); ++u) {
      double s = 0.0;
      for (double& p : x.row(u)) {
        p = std::max(p, 0.0);
        s += p;
      }
      for (double& p : x.row(u)) p /= s;
    }
  }

  Matrix neutral() const {
    Matrix x(blocks(), dim());
    for (std::size_t u = 0; u < blocks(); ++u) {
      if (family_ == Family::multilinear)
        x(u, 0) = mu_.mean();
      else
        for (std::size_t r = 0; r < mu_.size(); ++r) x(u, r) = mu_.prob(r);
    }
    return x;
  }

  Matrix constant(const std::vector<double>& row) const {
    Matrix x(blocks(), dim());
    for (std::size_t u = 0; u < blocks(); ++u)
      for (std::size_t d = 0; d < dim(); ++d) x(u, d) = row[d];
    return x;
  }

  // Constant profiles for the pre-solve: a 1-D grid over [min atom, max atom] or a simplex
  // lattice sized to roughly `count` points.
  std::vector<Matrix> constant_candidates(std::size_t count) const {
    std::vector<Matrix> out;
    if (family_ == Family::multilinear) {
      const double lo = mu_.min_atom(), hi = mu_.max_atom();
      const std::size_t g = std::max<std::size_t>(count, 2);
      for (std::size_t j = 0; j < g; ++j)
        out.push_back(constant({lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(g - 1)}));
      return out;
    }
    const std::size_t k = mu_.size();
    std::size_t denom = 1;
    auto lattice_size = [k](std::size_t d) {
      double c = 1.0;  // C(d + k - 1, k - 1)
      for (std::size_t i = 1; i < k; ++i) c = c * static_cast<double>(d + i) / static_cast<double>(i);
      return c;
    };
    while (denom < 400 && lattice_size(denom + 1) <= static_cast<double>(std::max<std::size_t>(count, 1)) * 10.0)
      ++denom;
    std::vector<std::size_t> comp(k, 0);
    auto emit = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
      if (pos + 1 == k) {
        comp[pos] = left;
        std::vector<double> row(k);
        for (std::size_t r = 0; r < k; ++r) row[r] = static_cast<double>(comp[r]) / static_cast<double>(denom);
        out.push_back(constant(row));
        return;
      }
      for (std::size_t c = 0; c <= left; ++c) {
        comp[pos] = c;
        self(self, pos + 1, left - c);
      }
    };
    emit(emit, 0, denom);
    return out;
  }

  Matrix start(std::size_t index, std::size_t total, Rng& rng) const {
    const std::size_t k = mu_.size();
    if (family_ == Family::multilinear) {
      const double lo = mu_.min_atom(), hi = mu_.max_atom();
      const std::size_t constants = (total + 1) / 2;
      if (index < constants)
        return constant({lo + (hi - lo) * (static_cast<double>(index) + 0.5) / static_cast<double>(constants)});
      Matrix x(blocks(), 1);
      for (double& v : x.data()) v = lo + (hi - lo) * rng.uniform();
      return x;
    }
    if (index < k) {
      std::vector<double> row(k);
      for (std::size_t r = 0; r < k; ++r) row[r] = 0.05 * mu_.prob(r) + (r == index ? 0.95 : 0.0);
      return constant(row);
    }
    Matrix x(blocks(), k);
    for (std::size_t u = 0; u < blocks(); ++u) {
      double s = 0.0;
      for (std::size_t r = 0; r < k; ++r) {
        x(u, r) = -std::log(1.0 - rng.uniform());
        s += x(u, r);
      }
      for (std::size_t r = 0; r < k; ++r) x(u, r) /= s;
    }
    return x;
  }

  Optimizer evaluate(double theta, const Matrix& x) const {
    Optimizer o;
    o.profile = x;
    o.penalty = penalty(x);
    o.statistic = statistic(x);
    o.value = theta == 0.0 ? -o.penalty : theta * o.statistic - o.penalty;
    o.residual = max_abs_diff(best_response(theta, x), x);
    return o;
  }

  double distance(const Matrix& a, const Matrix& b) const {
    double d = 0.0;
    for (std::size_t u = 0; u < a.rows(); ++u)
      for (std::size_t r = 0; r < a.cols(); ++r) d += widths_[u] * std::abs(a(u, r) - b(u, r));
    return d;
  }

 private:
  static StepKernel refined(const StepKernel& w, std::size_t blocks) {
    if (blocks == 0) return w;
    return w.refine(common_refinement(w.breakpoints(), uniform_breakpoints(blocks)));
  }

  Family family_;
  const Motif& h_;
  StepKernel w_;
  const FiniteBaseMeasure& mu_;
  const std::optional<PhiKernel>& phi_;
  SolveConfig cfg_;
  std::vector<double> widths_;
};

struct StartOutcome {
  StartReport report;
  Matrix profile;
};

bool no_worse(double candidate, double current) {
  return candidate >= current - 1e-14 * (1.0 + std::abs(current));
}

// Strict increase beyond rounding noise. Within the noise band the objective cannot rank
// steps, so callers fall back to comparing stationarity residuals.
bool clearly_better(double candidate, double current) {
  return candidate > current + 1e-14 * (1.0 + std::abs(current));
}

// Damped mean-space fixed point with backtracking on the objective; when the step length
// collapses, continues with ascent steps in natural coordinates.
StartOutcome run_start(const Model& model, double theta, Matrix x, const SolveConfig& cfg) {
  StartOutcome out;
  model.normalize(x);
  double value = model.objective(theta, x);
  double lambda = cfg.damping;
  bool stalled = false;
  std::size_t it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const Matrix br = model.best_response(theta, x);
    const double res = max_abs_diff(br, x);
    if (res <= cfg.tolerance) {
      out.report.converged = true;
      break;
    }
    bool accepted = false;
    while (lambda >= 1e-10) {
      Matrix cand(x.rows(), x.cols());
      for (std::size_t i = 0; i < cand.data().size(); ++i)
        cand.data()[i] = (1.0 - lambda) * x.data()[i] + lambda * br.data()[i];
      model.normalize(cand);
      const double cv = model.objective(theta, cand);
      if (clearly_better(cv, value) ||
          (no_worse(cv, value) && max_abs_diff(model.best_response(theta, cand), cand) < res)) {
        x = std::move(cand);
        value = cv;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    lambda = std::min(cfg.damping, 2.0 * lambda);
  }
  if (!out.report.converged && (stalled || it == cfg.max_iterations)) {
    out.report.fallback = true;
    Matrix eta = model.to_natural(x);
    double step = 1.0;
    for (std::size_t j = 0; j < cfg.max_iterations; ++j, ++it) {
      Matrix target = model.gradient(x);
      for (double& e : target.data()) e *= theta;
      const double res = max_abs_diff(model.from_natural(target), x);
      if (res <= cfg.tolerance) {
        out.report.converged = true;
        break;
      }
      bool accepted = false;
      while (step >= 1e-12) {
        Matrix cand_eta(eta.rows(), eta.cols());
        for (std::size_t i = 0; i < eta.data().size(); ++i)
          cand_eta.data()[i] = eta.data()[i] + step * (target.data()[i] - eta.data()[i]);
        Matrix cand = model.from_natural(cand_eta);
        const double cv = model.objective(theta, cand);
        if (clearly_better(cv, value) ||
            (no_worse(cv, value) && max_abs_diff(model.best_response(theta, cand), cand) < res)) {
          eta = std::move(cand_eta);
          x = std::move(cand);
          value = cv;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      step = std::min(1.0, 2.0 * step);
    }
  }
  out.report.iterations = it;
  out.report.value = value;
  out.report.residual = max_abs_diff(model.best_response(theta, x), x);
  if (out.report.residual <= cfg.tolerance) out.report.converged = true;
  out.profile = std::move(x);
  return out;
}

SolveResult solve_model(const Model& model, double theta, const SolveConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
  SolveResult result;
  result.family = model.family();
  result.theta = theta;
  result.widths = model.widths();

  if (theta == 0.0) {
    // The penalty vanishes only at rho, so Z(0) = 0 with the neutral profile.
    Optimizer o = model.evaluate(0.0, model.neutral());
    o.value = 0.0;
    o.penalty = 0.0;
    result.value = 0.0;
    result.residual = o.residual;
    result.optimizers.push_back(std::move(o));
    return result;
  }

  // Constant pre-solve.
  const auto candidates = model.constant_candidates(cfg.constant_grid);
  std::vector<double> cvals(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t i) { cvals[i] = model.objective(theta, candidates[i]); });
  std::size_t best_const = 0;
  for (std::size_t i = 1; i < cvals.size(); ++i)
    if (cvals[i] > cvals[best_const]) best_const = i;
  result.constant_lower_bound = cvals[best_const];

  const std::size_t total = std::max<std::size_t>(cfg.multistart, 1);
  std::vector<Matrix> starts;
  starts.push_back(candidates[best_const]);
  for (std::size_t s = 1; s < total; ++s) {
    Rng rng(derive_seed(cfg.seed, s));
    starts.push_back(model.start(s - 1, total - 1, rng));
  }
  std::vector<StartOutcome> outcomes(starts.size());
  parallel_for(starts.size(), [&](std::size_t s) {
    outcomes[s] = run_start(model, theta, starts[s], cfg);
    outcomes[s].report.start = s;
  });

  double best = -kInf;
  std::size_t best_any = 0;
  for (std::size_t s = 0; s < outcomes.size(); ++s) {
    result.starts.push_back(outcomes[s].report);
    if (outcomes[s].report.value > outcomes[best_any].report.value) best_any = s;
    if (outcomes[s].report.converged) best = std::max(best, outcomes[s].report.value);
  }
  if (best == -kInf) {
    throw ConvergenceError("no start reached the stationarity tolerance (best residual " +
                               std::to_string(outcomes[best_any].report.residual) + ")",
                           model.evaluate(theta, outcomes[best_any].profile));
  }
  result.value = best;
  for (const auto& o : outcomes) {
    if (!o.report.converged || o.report.value < best - cfg.value_tolerance) continue;
    bool duplicate = false;
    for (auto& kept : result.optimizers)
      if (model.distance(kept.profile, o.profile) < cfg.dedup_distance) {
        duplicate = true;
        break;
      }
    if (!duplicate) result.optimizers.push_back(model.evaluate(theta, o.profile));
  }
  for (const auto& o : result.optimizers) result.residual = std::max(result.residual, o.residual);
  return result;
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::multilinear:
      return "multilinear";
    case Family::potts:
      return "potts";
    case Family::generic:
      return "generic";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "multilinear" || name == "ising") return Family::multilinear;
  if (name == "potts") return Family::potts;
  if (name == "generic") return Family::generic;
  throw InvalidArgument("unknown family '" + std::string(name) + "' (expected multilinear, ising, potts, generic)");
}

void SolveConfig::validate() const {
  if (!(damping > 0.0 && damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (max_iterations == 0) throw InvalidArgument("max_iterations must be positive");
}

SolveResult solve_z(const VariationalProblem& problem, double theta, const SolveConfig& cfg) {
  const Model model(problem, cfg);
  return solve_model(model, theta, cfg);
}

SolveResult solve_z_multilinear(const Motif& h, const StepKernel& w, const FiniteBaseMeasure& mu, double theta,
                                const SolveConfig& cfg) {
  return solve_z(VariationalProblem{Family::multilinear, h, w, mu, std::nullopt}, theta, cfg);
}

SolveResult solve_z_potts(const Motif& h, const StepKernel& w, const FiniteBaseMeasure& mu, double theta,
                          const SolveConfig& cfg) {
  return solve_z(VariationalProblem{Family::potts, h, w, mu, std::nullopt}, theta, cfg);
}

SolveResult solve_z_generic(const Motif& h, const StepKernel& w, const FiniteBaseMeasure& mu, const PhiKernel& phi,
                            double theta, const SolveConfig& cfg) {
  return solve_z(VariationalProblem{Family::generic, h, w, mu, phi}, theta, cfg);
}

Optimizer evaluate_profile(const VariationalProblem& problem, double theta, const Matrix& profile,
                           const SolveConfig& cfg) {
  const Model model(problem, cfg);
  if (profile.rows() != model.blocks() || profile.cols() != model.dim())
    throw InvalidArgument("evaluate_profile: profile has the wrong shape");
  return model.evaluate(theta, profile);
}

std::vector<double> profile_means(const VariationalProblem& problem, const Matrix& profile) {
  if (problem.family == Family::multilinear) return profile.data();
  std::vector<double> means(profile.rows(), 0.0);
  for (std::size_t u = 0; u < profile.rows(); ++u)
    for (std::size_t r = 0; r < profile.cols(); ++r) means[u] += profile(u, r) * problem.mu.atom(r);
  return means;
}

std::vector<RatePoint> legendre_rate(const VariationalProblem& problem, const std::vector<double>& theta_grid,
                                     const SolveConfig& cfg) {
  const Model model(problem, cfg);
  std::vector<RatePoint> points(theta_grid.size());
  parallel_for(theta_grid.size(), [&](std::size_t i) {
    RatePoint& p = points[i];
    p.theta = theta_grid[i];
    p.solution = solve_model(model, p.theta, cfg);
    p.z = p.solution.value;
    for (const auto& o : p.solution.optimizers) p.ts.push_back(o.statistic);
    p.t = p.ts.front();
    const auto [lo, hi] = std::minmax_element(p.ts.begin(), p.ts.end());
    p.flagged = *hi - *lo > cfg.flag_tolerance;
    p.rate = p.theta == 0.0 ? 0.0 : p.theta * p.t - p.z;
  });
  return points;
}

ConstrainedRate constrained_rate(const VariationalProblem& problem, double t, const SolveConfig& cfg) {
  const Model model(problem, cfg);
  const auto& grid = cfg.theta_grid.empty() ? kDefaultRateGrid : cfg.theta_grid;
  const auto curve = legendre_rate(problem, grid, cfg);

  double tmin = kInf, tmax = -kInf;
  for (const auto& p : curve)
    for (double s : p.ts) {
      tmin = std::min(tmin, s);
      tmax = std::max(tmax, s);
    }
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (!(t >= tmin - slack && t <= tmax + slack))
    throw InvalidArgument("constrained_rate: t = " + std::to_string(t) + " is outside the range [" +
                          std::to_string(tmin) + ", " + std::to_string(tmax) +
                          "] of statistics observed on the theta grid");

  ConstrainedRate out;
  out.t = t;
  const Matrix neutral = model.neutral();
  if (std::abs(model.statistic(neutral) - t) <= slack) {
    out.witness = neutral;
    out.violation = std::abs(model.statistic(neutral) - t);
    return out;
  }
  if (std::all_of(curve.begin(), curve.end(), [&](const RatePoint& p) {
        return std::all_of(p.ts.begin(), p.ts.end(), [&](double s) { return std::abs(s - model.statistic(neutral)) <= slack; });
      }))
    throw InvalidArgument("constrained_rate: the theta grid only produced the typical value");

  // Start from the grid optimizer whose statistic is nearest to t. Optimizers sitting at the
  // typical value are skipped: the statistic can be stationary there (e.g. f = 0 for an even
  // G), which would leave the multiplier nothing to act on.
  const double typical = model.statistic(neutral);
  double lambda = 0.0, nearest = kInf;
  Matrix x;
  for (const auto& p : curve)
    for (const auto& o : p.solution.optimizers)
      if (std::abs(o.statistic - typical) > slack && std::abs(o.statistic - t) < nearest) {
        nearest = std::abs(o.statistic - t);
        lambda = p.theta;
        x = o.profile;
      }

  double rho = 1.0;
  double prev_violation = kInf;
  const double target_violation = 1e-12 * std::max(1.0, std::abs(t));
  Matrix eta = model.to_natural(x);
  x = model.from_natural(eta);
  std::size_t iterations = 0;
  auto lagrangian = [&](const Matrix& y, double* gval) {
    const double g = model.statistic(y);
    if (gval) *gval = g;
    return model.penalty(y) - lambda * (g - t) + 0.5 * rho * (g - t) * (g - t);
  };
  auto inner_residual = [&](const Matrix& y, double gy) {
    Matrix target = model.gradient(y);
    for (double& e : target.data()) e *= lambda - rho * (gy - t);
    return max_abs_diff(model.from_natural(target), y);
  };
  for (std::size_t outer = 0; outer < 200; ++outer) {
    double g = 0.0;
    double lval = lagrangian(x, &g);
    double step = 1.0;
    bool inner_converged = false;
    for (std::size_t inner = 0; inner < cfg.max_iterations; ++inner, ++iterations) {
      const double theta_eff = lambda - rho * (g - t);
      Matrix target = model.gradient(x);
      for (double& e : target.data()) e *= theta_eff;
      const double res = max_abs_diff(model.from_natural(target), x);
      if (res <= cfg.tolerance) {
        inner_converged = true;
        break;
      }
      bool accepted = false;
      while (step >= 1e-14) {
        Matrix cand_eta(eta.rows(), eta.cols());
        for (std::size_t i = 0; i < eta.data().size(); ++i)
          cand_eta.data()[i] = eta.data()[i] + step * (target.data()[i] - eta.data()[i]);
        Matrix cand = model.from_natural(cand_eta);
        double cg = 0.0;
        const double cl = lagrangian(cand, &cg);
        if (clearly_better(-cl, -lval) || (no_worse(-cl, -lval) && inner_residual(cand, cg) < res)) {
          eta = std::move(cand_eta);
          x = std::move(cand);
          lval = cl;
          g = cg;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        inner_converged = true;  // no further decrease representable
        break;
      }
      step = std::min(1.0, 2.0 * step);
    }
    const double violation = g - t;
    out.violation = std::abs(violation);
    lambda -= rho * violation;
    if (out.violation <= target_violation) break;
    if (inner_converged && out.violation > 0.5 * prev_violation) rho = std::min(rho * 4.0, 1e4);
    prev_violation = out.violation;
  }
  out.rate = model.penalty(x);
  out.multiplier = lambda;
  out.witness = x;
  out.iterations = iterations;
  return out;
}

}  // namespace ldpustat
