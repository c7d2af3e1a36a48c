#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace ldpustat {

/// Probability measure with finitely many atoms, all of positive mass.
///
/// Atoms are real values; for color models they are the labels 1..c and the statistics
/// only look at atom indices.
class FiniteBaseMeasure {
 public:
  FiniteBaseMeasure(std::vector<double> atoms, std::vector<double> probs);

  static FiniteBaseMeasure rademacher();
  /// Uniform on the colors {1, ..., c}.
  static FiniteBaseMeasure uniform_colors(std::size_t c);
  /// "rademacher" or "uniform:c".
  static FiniteBaseMeasure builtin(std::string_view name);

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  double atom(std::size_t k) const { return atoms_[k]; }
  double prob(std::size_t k) const { return probs_[k]; }

  double min_atom() const { return atoms_[argmin_]; }
  double max_atom() const { return atoms_[argmax_]; }
  std::size_t argmin() const noexcept { return argmin_; }
  std::size_t argmax() const noexcept { return argmax_; }
  double mean() const;
  /// Invariant under x -> -x.
  bool is_symmetric(double tol = 1e-12) const;

 private:
  std::vector<double> atoms_;
  std::vector<double> probs_;
  std::size_t argmin_ = 0;
  std::size_t argmax_ = 0;
};

struct TiltSolverConfig {
  double tolerance = 1e-15;      // on |alpha'(theta) - m|, relative to the atom range
  std::size_t max_iterations = 200;
  double initial_bracket = 1.0;  // bracket [-b, b] doubled until it contains the root
  double boundary_margin = 1e-12;  // profiles within this of cl(N) are clamped into it
};

/// alpha(theta) = log sum_k p_k exp(theta a_k). alpha(0) = 0.
double log_mgf(const FiniteBaseMeasure& mu, double theta);
/// alpha'(theta): mean of the tilted measure.
double mean_map(const FiniteBaseMeasure& mu, double theta);
/// alpha''(theta): variance of the tilted measure.
double variance_map(const FiniteBaseMeasure& mu, double theta);

/// beta(m) = (alpha')^{-1}(m) on [min atom, max atom]; +-infinity at the endpoints.
/// Safeguarded Newton inside a bisection bracket.
double inverse_mean(const FiniteBaseMeasure& mu, double m, const TiltSolverConfig& cfg = {});

/// gamma(beta(m)) = D(mu_{beta(m)} || mu). Equals -log mu({endpoint}) at the endpoints.
double gamma(const FiniteBaseMeasure& mu, double m, const TiltSolverConfig& cfg = {});

/// Probabilities proportional to p_k exp(theta a_k); entries may underflow to zero.
std::vector<double> tilted_probs(const FiniteBaseMeasure& mu, double theta);
FiniteBaseMeasure tilted_measure(const FiniteBaseMeasure& mu, double theta);

/// D(nu || mu) over a common atom set, with 0 log 0 = 0. Throws on mismatched atoms.
double kl_divergence(const FiniteBaseMeasure& nu, const FiniteBaseMeasure& mu);
/// D(q || mu) for a probability vector q indexed like mu's atoms; +inf if q charges
/// an atom of zero mass under mu.
double kl_divergence(const std::vector<double>& q, const std::vector<double>& mu);

}  // namespace ldpustat
