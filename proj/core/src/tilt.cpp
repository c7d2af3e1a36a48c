#include "ldpustat/tilt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "ldpustat/errors.hpp"

namespace ldpustat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite_theta(double theta, const char* where) {
  if (!std::isfinite(theta)) throw InvalidArgument(std::string(where) + ": theta must be finite");
}

// Unnormalized tilted weights p_k exp(theta a_k - shift) with the max shift; returns shift.
double shifted_weights(const FiniteBaseMeasure& mu, double theta, std::vector<double>& w) {
  const std::size_t k = mu.size();
  w.resize(k);
  double shift = -kInf;
  for (std::size_t i = 0; i < k; ++i) shift = std::max(shift, theta * mu.atom(i) + std::log(mu.prob(i)));
  for (std::size_t i = 0; i < k; ++i) w[i] = std::exp(theta * mu.atom(i) + std::log(mu.prob(i)) - shift);
  return shift;
}

// alpha'(theta) - m computed as a weighted average of (a_k - m).
double mean_gap(const FiniteBaseMeasure& mu, double theta, double m, double* variance) {
  std::vector<double> w;
  shifted_weights(mu, theta, w);
  double s = 0.0, first = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    s += w[i];
    first += w[i] * (mu.atom(i) - m);
  }
  first /= s;
  if (variance) {
    double second = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double d = mu.atom(i) - m - first;
      second += w[i] * d * d;
    }
    *variance = second / s;
  }
  return first;
}

}  // namespace

FiniteBaseMeasure::FiniteBaseMeasure(std::vector<double> atoms, std::vector<double> probs)
    : atoms_(std::move(atoms)), probs_(std::move(probs)) {
  if (atoms_.empty()) throw InvalidArgument("FiniteBaseMeasure: no atoms");
  if (atoms_.size() != probs_.size()) throw InvalidArgument("FiniteBaseMeasure: atoms/probs size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!std::isfinite(atoms_[i])) throw InvalidArgument("FiniteBaseMeasure: non-finite atom");
    if (!(probs_[i] > 0.0)) throw InvalidArgument("FiniteBaseMeasure: every atom needs positive mass");
    for (std::size_t j = 0; j < i; ++j)
      if (atoms_[j] == atoms_[i]) throw InvalidArgument("FiniteBaseMeasure: atoms must be distinct");
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("FiniteBaseMeasure: probabilities must sum to 1");
  argmin_ = static_cast<std::size_t>(std::min_element(atoms_.begin(), atoms_.end()) - atoms_.begin());
  argmax_ = static_cast<std::size_t>(std::max_element(atoms_.begin(), atoms_.end()) - atoms_.begin());
}

FiniteBaseMeasure FiniteBaseMeasure::rademacher() { return FiniteBaseMeasure({-1.0, 1.0}, {0.5, 0.5}); }

FiniteBaseMeasure FiniteBaseMeasure::uniform_colors(std::size_t c) {
  if (c == 0) throw InvalidArgument("uniform_colors: need at least one color");
  std::vector<double> atoms(c), probs(c, 1.0 / static_cast<double>(c));
  for (std::size_t r = 0; r < c; ++r) atoms[r] = static_cast<double>(r + 1);
  return FiniteBaseMeasure(std::move(atoms), std::move(probs));
}

FiniteBaseMeasure FiniteBaseMeasure::builtin(std::string_view name) {
  if (name == "rademacher") return rademacher();
  if (name.substr(0, 8) == "uniform:") {
    std::size_t c = 0;
    const auto digits = name.substr(8);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), c);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && c > 0) return uniform_colors(c);
  }
  throw InvalidArgument("unknown base measure '" + std::string(name) + "'");
}

double FiniteBaseMeasure::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += atoms_[i] * probs_[i];
  return s;
}

bool FiniteBaseMeasure::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < size(); ++i) {
    bool matched = false;
    for (std::size_t j = 0; j < size(); ++j)
      if (std::abs(atoms_[i] + atoms_[j]) <= tol && std::abs(probs_[i] - probs_[j]) <= tol) matched = true;
    if (!matched) return false;
  }
  return true;
}

double log_mgf(const FiniteBaseMeasure& mu, double theta) {
  require_finite_theta(theta, "log_mgf");
  if (theta == 0.0) return 0.0;
  std::vector<double> w;
  const double shift = shifted_weights(mu, theta, w);
  double s = 0.0;
  for (double x : w) s += x;
  return shift + std::log(s);
}

double mean_map(const FiniteBaseMeasure& mu, double theta) {
  require_finite_theta(theta, "mean_map");
  return mean_gap(mu, theta, 0.0, nullptr);
}

double variance_map(const FiniteBaseMeasure& mu, double theta) {
  require_finite_theta(theta, "variance_map");
  double var = 0.0;
  mean_gap(mu, theta, 0.0, &var);
  return var;
}

double inverse_mean(const FiniteBaseMeasure& mu, double m, const TiltSolverConfig& cfg) {
  const double lo_atom = mu.min_atom(), hi_atom = mu.max_atom();
  if (!(m >= lo_atom && m <= hi_atom))
    throw InvalidArgument("inverse_mean: m = " + std::to_string(m) + " lies outside [min atom, max atom]");
  if (mu.size() == 1) throw InvalidArgument("inverse_mean: degenerate measure");
  if (m == hi_atom) return kInf;
  if (m == lo_atom) return -kInf;

  const double scale = hi_atom - lo_atom;
  const double tol = cfg.tolerance * scale;
  double lo = -cfg.initial_bracket, hi = cfg.initial_bracket;
  while (mean_gap(mu, hi, m, nullptr) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw InvalidArgument("inverse_mean: root not bracketed");
  }
  while (mean_gap(mu, lo, m, nullptr) > 0.0) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e300) throw InvalidArgument("inverse_mean: root not bracketed");
  }
  double theta = std::clamp(0.0, lo, hi);
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    double var = 0.0;
    const double f = mean_gap(mu, theta, m, &var);
    if (std::abs(f) <= tol) return theta;
    if (f < 0.0)
      lo = theta;
    else
      hi = theta;
    double next = var > 0.0 ? theta - f / var : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == theta || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(theta)))
      return next;
    theta = next;
  }
  return theta;
}

double gamma(const FiniteBaseMeasure& mu, double m, const TiltSolverConfig& cfg) {
  const double theta = inverse_mean(mu, m, cfg);
  if (theta == kInf) return -std::log(mu.prob(mu.argmax()));
  if (theta == -kInf) return -std::log(mu.prob(mu.argmin()));
  return theta * m - log_mgf(mu, theta);
}

std::vector<double> tilted_probs(const FiniteBaseMeasure& mu, double theta) {
  require_finite_theta(theta, "tilted_probs");
  std::vector<double> w;
  shifted_weights(mu, theta, w);
  double s = 0.0;
  for (double x : w) s += x;
  for (double& x : w) x /= s;
  return w;
}

FiniteBaseMeasure tilted_measure(const FiniteBaseMeasure& mu, double theta) {
  return FiniteBaseMeasure(mu.atoms(), tilted_probs(mu, theta));
}

double kl_divergence(const std::vector<double>& q, const std::vector<double>& mu) {
  if (q.size() != mu.size()) throw InvalidArgument("kl_divergence: support size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    if (mu[i] <= 0.0) return kInf;
    s += q[i] * std::log(q[i] / mu[i]);
  }
  return std::max(s, 0.0);
}

double kl_divergence(const FiniteBaseMeasure& nu, const FiniteBaseMeasure& mu) {
  if (nu.atoms() != mu.atoms()) throw InvalidArgument("kl_divergence: measures live on different atoms");
  return kl_divergence(nu.probs(), mu.probs());
}

}  // namespace ldpustat
