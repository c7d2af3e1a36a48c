#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "ldpustat/matrix.hpp"
#include "ldpustat/motif.hpp"

namespace ldpustat {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Piecewise-constant function on [0, 1].
struct StepFunction {
  std::vector<double> breakpoints;  // size blocks()+1, 0 = b_0 < ... < b_m = 1
  std::vector<double> values;

  std::size_t blocks() const noexcept { return values.size(); }
  double width(std::size_t i) const { return breakpoints[i + 1] - breakpoints[i]; }
  double integral() const;
  /// Normalized L^r norm on [0,1]; r = inf gives the essential sup of |f|.
  double lp_norm(double r) const;
  /// E[f^power 1{f^power > cutoff}] for f >= 0; the uniform-integrability tail statistic.
  double tail_mean(double power, double cutoff) const;
};

/// Symmetric block-constant kernel W on [0,1]^2.
class StepKernel {
 public:
  StepKernel(std::vector<double> breakpoints, Matrix values);

  static StepKernel uniform(Matrix values);
  static StepKernel constant(double c);

  std::size_t blocks() const noexcept { return values_.rows(); }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  std::vector<double> widths() const;
  double width(std::size_t i) const { return breakpoints_[i + 1] - breakpoints_[i]; }
  double area(std::size_t i, std::size_t j) const { return width(i) * width(j); }
  double value(std::size_t i, std::size_t j) const { return values_(i, j); }
  const Matrix& values() const noexcept { return values_; }

  std::size_t block_of(double x) const;
  double operator()(double x, double y) const { return values_(block_of(x), block_of(y)); }

  /// Same function on a finer partition; `breakpoints` must contain ours.
  StepKernel refine(const std::vector<double>& breakpoints) const;
  /// Block relabeling W^sigma(x, y) = W(sigma(x), sigma(y)); sigma must map blocks onto
  /// blocks of equal width so that it is measure preserving.
  StepKernel permuted(std::span<const std::size_t> perm) const;

  /// Block areas times values: the matrix whose sub-sums are the rectangle integrals.
  Matrix weighted_values() const;

 private:
  std::vector<double> breakpoints_;
  Matrix values_;
};

/// Union of two partitions (breakpoints closer than 1e-14 are merged).
std::vector<double> common_refinement(const std::vector<double>& a, const std::vector<double>& b);
/// W1 - W2 on the common refinement.
StepKernel difference(const StepKernel& a, const StepKernel& b);

/// Step kernel W_Q: Q(i, j) on the uniform block (i, j).
StepKernel embed_matrix(const SymmetricMatrix& q);

/// G / ||G||_1 with ||G||_1 = n^-2 sum_ij G(i, j).
SymmetricMatrix scaled_adjacency(const SymmetricMatrix& adjacency);

inline constexpr std::size_t kDefaultExhaustiveCutLimit = 20;

/// ||W||_box by exhaustive search over block-aligned row subsets (the optimal column
/// set for a fixed row set is a sign pattern). Throws LimitExceeded above `max_blocks`.
double cut_norm_exact(const StepKernel& w, std::size_t max_blocks = kDefaultExhaustiveCutLimit);

/// Lower bound on ||W||_box by alternating best-response set improvement from random
/// starts. Restart r uses derive_seed(seed, r); restart 0 starts from the full set.
double cut_norm_heuristic(const StepKernel& w, std::size_t restarts = 8, std::uint64_t seed = 1);

struct CutOptions {
  std::size_t exact_limit = 14;
  std::size_t restarts = 8;
  std::uint64_t seed = 1;
};

struct CutEstimate {
  double value = 0.0;
  bool exact = false;
};

/// d_box(W1, W2): exact when the common refinement has at most `exact_limit` blocks.
CutEstimate cut_distance(const StepKernel& a, const StepKernel& b, const CutOptions& options = {});

struct WeakCutBudget {
  std::size_t exhaustive_limit = 8;
  bool force_annealing = false;
  std::size_t anneal_steps = 4000;
  std::size_t anneal_restarts = 4;
  std::uint64_t seed = 1;
  CutOptions cut;
};

struct WeakCutResult {
  double value = 0.0;
  bool certified_exact = false;  // exact minimum over width-preserving block permutations
  std::vector<std::size_t> permutation;
};

/// Upper bound on delta_box: min over width-preserving block permutations sigma of
/// d_box(W1^sigma, W2), on the common refinement.
WeakCutResult weak_cut_distance(const StepKernel& a, const StepKernel& b, const WeakCutBudget& budget = {});

/// Normalized L^r norm (r >= 1, r = inf allowed).
double lp_norm(const StepKernel& w, double r);

/// x -> int |W(x, y)| dy.
StepFunction degree_profile(const StepKernel& w);

struct AssumptionThresholds {
  double norm_bound = 10.0;     // ||W||_r treated as "finite" when <= this
  double degree_bound = 10.0;   // bound for E r_W and ||r_W||_inf
  double ui_cutoff = 10.0;      // tail cutoff K in E[r^{v-1} 1{r^{v-1} > K}]
  double ui_tolerance = 0.05;   // tail statistic accepted below this
};

struct DegreeStats {
  double mean = 0.0;        // E r_W(U) = ||W||_1
  double mean_power = 0.0;  // E r_W(U)^{v-1}
  double sup = 0.0;         // ||r_W||_inf
  double ui_tail = 0.0;     // E[r^{v-1} 1{r^{v-1} > cutoff}]
};

struct AssumptionReport {
  double p = 0.0;
  double q = 0.0;
  double q_delta = 0.0;
  std::size_t motif_vertices = 0;
  std::size_t motif_max_degree = 0;
  // exponent -> norm, for the finite-n kernel Wn and the limit W. Infinity keyed as kInfinity.
  std::map<double, double> norms_wn;
  std::map<double, double> norms_w;
  DegreeStats degree_wn;
  DegreeStats degree_w;
  // Each flag is evaluated for every motif; `applicable_*` says whether the motif is an
  // edge, a star or a tree.
  bool holder_pq = false;    // 1/p + 1/q <= 1
  bool q_moment = false;     // ||Wn||_{q Delta}, ||W||_{q Delta} <= norm_bound
  bool sup_bounded = false;  // ||Wn||_inf <= norm_bound (q = inf version)
  bool degree_l1 = false;    // edge condition: E r <= degree_bound for both
  bool degree_ui = false;    // star condition: tail stat <= ui_tolerance, E r_W^{v-1} <= degree_bound
  bool degree_sup = false;   // tree condition: ||r||_inf <= degree_bound for both
  bool applicable_edge = false;
  bool applicable_star = false;
  bool applicable_tree = false;
};

/// Finite-n validators for the regularity assumptions. Throws InvalidArgument when
/// p < 1, q <= 1, or 1/p + 1/q > 1.
AssumptionReport check_assumptions(const StepKernel& wn, const StepKernel& w, const Motif& motif, double p,
                                   double q, const AssumptionThresholds& thresholds = {});

}  // namespace ldpustat
