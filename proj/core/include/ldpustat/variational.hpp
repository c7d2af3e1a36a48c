#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldpustat/errors.hpp"
#include "ldpustat/functionals.hpp"
#include "ldpustat/kernel.hpp"
#include "ldpustat/matrix.hpp"
#include "ldpustat/motif.hpp"
#include "ldpustat/phi.hpp"
#include "ldpustat/tilt.hpp"

namespace ldpustat {

/// Which mean-field representation the solver optimizes over.
///   multilinear: real profile f, objective theta G_1(f) - int gamma(f)
///   potts:       color profile f, objective theta G_2(f) - sum_u w_u D(f_u || mu)
///   generic:     block measure nu, objective theta T_{W,phi}(nu) - D(nu | rho)
enum class Family { multilinear, potts, generic };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

struct SolveConfig {
  std::size_t blocks = 0;  // 0 keeps the kernel's partition; otherwise refine onto m uniform blocks
  double damping = 0.5;
  double tolerance = 1e-11;  // sup-norm stationarity residual in mean coordinates
  std::size_t max_iterations = 20000;
  std::size_t multistart = 16;
  std::uint64_t seed = 1;
  std::vector<double> theta_grid;  // used by legendre_rate / constrained_rate
  double dedup_distance = 1e-5;    // width-weighted L1 distance below which optimizers merge
  double value_tolerance = 1e-9;   // optimizers are starts within this of the best value
  double flag_tolerance = 1e-7;    // optimizers whose statistics differ by more are flagged
  std::size_t constant_grid = 201;
  std::size_t table_limit = kDefaultTableLimit;
  TiltSolverConfig tilt;

  void validate() const;
};

/// A limiting optimization problem; `phi` is required for the generic family only.
struct VariationalProblem {
  Family family = Family::multilinear;
  Motif motif;
  StepKernel w;
  FiniteBaseMeasure mu;
  std::optional<PhiKernel> phi;
};

struct Optimizer {
  /// multilinear: m x 1 block means; potts / generic: m x k block laws.
  Matrix profile;
  double value = 0.0;      // theta * statistic - penalty
  double statistic = 0.0;  // G_1, G_2 or T at the profile
  double penalty = 0.0;
  double residual = 0.0;
};

struct StartReport {
  std::size_t start = 0;
  bool converged = false;
  bool fallback = false;  // natural-parameter ascent was needed
  std::size_t iterations = 0;
  double value = 0.0;
  double residual = 0.0;
};

struct SolveResult {
  Family family = Family::multilinear;
  double theta = 0.0;
  double value = 0.0;  // Z(theta)
  std::vector<double> widths;
  std::vector<Optimizer> optimizers;  // distinct profiles attaining the value
  std::vector<StartReport> starts;
  double residual = 0.0;  // worst residual over reported optimizers
  double constant_lower_bound = 0.0;
};

/// No start met the stationarity tolerance; carries the best iterate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Optimizer best) : Error(what), best_(std::move(best)) {}
  const Optimizer& best() const noexcept { return best_; }

 private:
  Optimizer best_;
};

SolveResult solve_z(const VariationalProblem& problem, double theta, const SolveConfig& cfg = {});
SolveResult solve_z_multilinear(const Motif& h, const StepKernel& w, const FiniteBaseMeasure& mu, double theta,
                                const SolveConfig& cfg = {});
SolveResult solve_z_potts(const Motif& h, const StepKernel& w, const FiniteBaseMeasure& mu, double theta,
                          const SolveConfig& cfg = {});
SolveResult solve_z_generic(const Motif& h, const StepKernel& w, const FiniteBaseMeasure& mu, const PhiKernel& phi,
                            double theta, const SolveConfig& cfg = {});

/// Objective of `problem` at a profile (same layout as Optimizer::profile), on the solver's
/// partition for `cfg`.
Optimizer evaluate_profile(const VariationalProblem& problem, double theta, const Matrix& profile,
                           const SolveConfig& cfg = {});

/// Block means of an optimizer profile (the profile itself for multilinear).
std::vector<double> profile_means(const VariationalProblem& problem, const Matrix& profile);

struct RatePoint {
  double theta = 0.0;
  double t = 0.0;     // statistic at the best optimizer, Z'(theta) where single valued
  double rate = 0.0;  // theta t - Z(theta)
  double z = 0.0;
  bool flagged = false;       // optimizers disagree on the statistic
  std::vector<double> ts;     // statistic at every reported optimizer
  SolveResult solution;
};

/// Parametric rate curve (t(theta), theta t(theta) - Z(theta)) over the grid.
std::vector<RatePoint> legendre_rate(const VariationalProblem& problem, const std::vector<double>& theta_grid,
                                     const SolveConfig& cfg = {});

struct ConstrainedRate {
  double t = 0.0;
  double rate = 0.0;       // minimal penalty subject to statistic = t
  double multiplier = 0.0; // Lagrange multiplier; the dual theta
  Matrix witness;
  double violation = 0.0;  // |statistic(witness) - t|
  std::size_t iterations = 0;
};

inline const std::vector<double> kDefaultRateGrid = {-2.0, -1.0, -0.6, -0.3, 0.0, 0.3, 0.6, 0.7,
                                                      0.8,  1.0,  1.25, 1.5,  2.0, 3.0, 5.0};

/// inf { penalty(f) : statistic(f) = t } by an augmented Lagrangian in natural parameters.
/// The feasible range is the span of statistics observed on cfg.theta_grid (kDefaultRateGrid
/// when empty); t outside it is rejected with InvalidArgument.
ConstrainedRate constrained_rate(const VariationalProblem& problem, double t, const SolveConfig& cfg = {});

}  // namespace ldpustat
