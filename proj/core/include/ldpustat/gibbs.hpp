#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ldpustat/matrix.hpp"
#include "ldpustat/motif.hpp"
#include "ldpustat/phi.hpp"
#include "ldpustat/tilt.hpp"
#include "ldpustat/ustat.hpp"

namespace ldpustat {

/// R_{n,theta}: mu^{(x)n} reweighted by exp(n theta S_n), S_n the U (default) or V statistic.
class GibbsModel {
 public:
  /// The diagonal of q is forced to zero.
  GibbsModel(Motif motif, SymmetricMatrix q, PhiKernel phi, FiniteBaseMeasure mu, double theta,
             Statistic statistic = Statistic::u);

  /// H = K2, Q = 1{i != j}, phi = x y over the atoms of mu (Rademacher by default).
  static GibbsModel ising_complete(std::size_t n, double theta);
  static GibbsModel ising_complete(std::size_t n, double theta, const FiniteBaseMeasure& mu);
  /// H = K2, Q = 1{i != j}, phi = 1{x = y}, mu uniform on c colors.
  static GibbsModel potts_complete(std::size_t n, std::size_t c, double theta);

  const Motif& motif() const noexcept { return motif_; }
  const SymmetricMatrix& q() const noexcept { return q_; }
  const PhiKernel& phi() const noexcept { return phi_; }
  const FiniteBaseMeasure& mu() const noexcept { return mu_; }
  double theta() const noexcept { return theta_; }
  Statistic statistic_kind() const noexcept { return statistic_; }
  std::size_t n() const noexcept { return q_.size(); }

  GibbsModel with_theta(double theta) const;
  double statistic(const DataVector& x) const;
  /// Stable FNV-1a digest of every model ingredient, as 16 hex digits.
  std::string hash() const;

 private:
  Motif motif_;
  SymmetricMatrix q_;
  PhiKernel phi_;
  FiniteBaseMeasure mu_;
  double theta_;
  Statistic statistic_;
};

struct EnumerationOptions {
  std::size_t limit = std::size_t{1} << 20;  // maximum number of enumerated (reduced) states
  /// Merge sites with identical coupling rows (twins); the statistic is invariant under
  /// permutations within a twin class, so only per-class atom counts are enumerated.
  bool reduce_twins = true;
};

/// Partition of the sites into twin classes: Q(i, k) = Q(j, k) for every k outside {i, j}.
std::vector<std::vector<std::size_t>> twin_classes(const SymmetricMatrix& q);

/// Every (reduced) state with its log mu-weight (log multiplicity included) and statistic.
struct StateTable {
  std::vector<double> log_weight;
  std::vector<double> statistic;
  bool reduced = false;
};
StateTable enumerate_states(const GibbsModel& model, const EnumerationOptions& options = {});

/// Z_n(theta) = n^-1 log E exp(n theta S_n) by enumeration. Throws LimitExceeded when the
/// state count exceeds options.limit.
double exact_logz(const GibbsModel& model, const EnumerationOptions& options = {});

enum class CompleteFamily { ising, potts };
CompleteFamily parse_complete_family(std::string_view name);

/// Z_n for the complete-graph K2 models by summing over type classes (atom counts):
/// ising uses phi = x y over mu's atoms, potts uses phi = 1{x = y} over mu's colors.
double exact_logz_complete(CompleteFamily family, std::size_t n, double theta, const FiniteBaseMeasure& mu,
                           std::size_t max_terms = 10'000'000);

/// Raw-state helpers for small n: state index s has x_i = (s / k^i) mod k.
DataVector decode_state(std::size_t index, std::size_t n, std::size_t k);
/// Exact R_{n,theta} over raw states (no twin reduction).
std::vector<double> exact_distribution(const GibbsModel& model, std::size_t limit = std::size_t{1} << 16);
/// Applies one systematic heat-bath sweep (sites 0..n-1) to a distribution over raw states.
std::vector<double> heat_bath_sweep(const GibbsModel& model, const std::vector<double>& distribution);

/// Law of x_site given the rest: proportional to mu_a exp(theta field(a)).
std::vector<double> heat_bath_conditional(const GibbsModel& model, const DataVector& x, std::size_t site);

struct ChainConfig {
  std::size_t sweeps = 1000;  // recorded phase, after burn-in
  std::size_t burn_in = 100;
  std::size_t thin = 1;
  std::uint64_t seed = 1;
  std::size_t blocks = 1;  // site groups for the block-averaged profile
  std::size_t recompute_interval = 100;
  double drift_tolerance = 1e-9;

  void validate() const;
};

struct ChainSample {
  std::size_t sweep = 0;
  double u_n = 0.0;
  std::vector<double> block_means;
  std::vector<double> color_fracs;
};

struct ChainMetadata {
  std::uint64_t seed = 0;
  std::size_t sweeps = 0;
  std::size_t burn_in = 0;
  std::size_t thin = 0;
  std::size_t blocks = 0;
  std::string model_hash;
  double max_drift = 0.0;  // largest |cached - recomputed| statistic seen
  bool fast_path = false;  // K2 with separable phi uses cached channel fields
};

struct ChainRecord {
  std::vector<ChainSample> samples;
  ChainMetadata metadata;
  DataVector final_state;
};

/// Systematic-scan heat bath started from mu^{(x)n} (seeded). Throws Error if the cached
/// statistic drifts from a full recomputation by more than the tolerance.
ChainRecord glauber_chain(const GibbsModel& model, const ChainConfig& cfg);

struct BatchMean {
  double mean = 0.0;
  double standard_error = 0.0;
};
/// Mean of the values with a batch-means standard error over `batches` contiguous batches.
BatchMean batch_means(const std::vector<double>& values, std::size_t batches = 20);

struct TiOptions {
  std::size_t batches = 20;
  bool refine = false;  // halve grid spacing until the truncation estimate is below target
  double target_error = 1e-3;
  std::size_t max_refinements = 3;
};

struct TiPoint {
  double theta = 0.0;
  double mean_u = 0.0;
  double standard_error = 0.0;
};

struct TiEstimate {
  double value = 0.0;
  double standard_error = 0.0;    // propagated batch-means error
  double truncation_error = 0.0;  // |trapezoid - coarse trapezoid| / 3
  double error = 0.0;             // sqrt(se^2 + truncation^2)
  std::vector<TiPoint> points;
};

/// Z_n(theta_last) = int_0^theta E_{R_{n,s}}[S_n] ds by trapezoid over the grid, which must
/// start at 0 and increase strictly. The chain at theta runs with seed derive_seed(cfg.seed, bits of theta),
/// so refined grids reuse the chains they already have.
TiEstimate estimate_logz_ti(const GibbsModel& model, const std::vector<double>& theta_grid, const ChainConfig& cfg,
                            const TiOptions& options = {});

struct TailPoint {
  std::size_t n = 0;
  double log_probability = 0.0;
  double rate = 0.0;  // -log P / n; +infinity when P = 0
};

/// -n^-1 log P(S_n >= t) under mu^{(x)n}, exactly, for each n (events use S_n >= t - 1e-12).
std::vector<TailPoint> tail_probability_exact(const std::function<GibbsModel(std::size_t)>& model_for_n, double t,
                                              const std::vector<std::size_t>& n_list,
                                              const EnumerationOptions& options = {});

/// Test function on [0,1] with exact interval integrals.
struct TestFunction {
  enum class Kind { power, step } kind = Kind::power;
  double parameter = 0.0;  // power: exponent k in u^k; step: s in 1{u <= s}

  static TestFunction power(double k) { return {Kind::power, k}; }
  static TestFunction step(double s) { return {Kind::step, s}; }
  std::string name() const;
  /// int_a^b g(u) du.
  double integral(double a, double b) const;
};

std::vector<TestFunction> default_test_functions();

/// A candidate limit profile: block means on the given breakpoints.
struct LimitProfile {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

struct WeakLawEntry {
  std::string name;
  double discrepancy = 0.0;  // chain-averaged min over profiles of |int omega_n g - int f g|
  double standard_error = 0.0;
};

struct WeakLawReport {
  std::vector<WeakLawEntry> entries;
  double surrogate = 0.0;  // chain average of min_f max_g |...|: finite-family surrogate of d_l
  double surrogate_error = 0.0;
  std::size_t chains = 0;
  std::size_t samples = 0;
};

/// Compares the empirical profile omega_n (x_i on [(i-1)/n, i/n)) of chain samples with the
/// candidate limits. Runs `chains` chains with seeds derive_seed(cfg.seed, c).
WeakLawReport weak_law_check(const GibbsModel& model, const std::vector<LimitProfile>& limits,
                             const std::vector<TestFunction>& tests, const ChainConfig& cfg, std::size_t chains = 8);

}  // namespace ldpustat
