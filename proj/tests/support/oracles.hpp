#pragma once

// Reference implementations written directly from the defining formulas, sharing no code
// with the library beyond plain data types. Slow on purpose.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;
using Tuple = std::vector<std::size_t>;
using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

inline double log_sum_exp(const Vec& xs) {
  double m = -INFINITY;
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

inline double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Calls fn(tuple) for every tuple in [n]^v, optionally only tuples of distinct entries.
inline void for_each_tuple(std::size_t n, std::size_t v, bool distinct, const std::function<void(const Tuple&)>& fn) {
  Tuple t(v, 0);
  while (true) {
    bool ok = true;
    if (distinct)
      for (std::size_t a = 0; a < v && ok; ++a)
        for (std::size_t b = a + 1; b < v && ok; ++b) ok = t[a] != t[b];
    if (ok) fn(t);
    std::size_t pos = 0;
    while (pos < v && ++t[pos] == n) t[pos++] = 0;
    if (pos == v) return;
  }
}

// n^-v sum over tuples of phi(x_i1..x_iv) prod_{edges} Q(i_a, i_b), diagonal of Q read as zero.
inline double motif_statistic(const Edges& edges, std::size_t v, const Mat& q, const std::vector<std::size_t>& x,
                              const std::function<double(const Tuple&)>& phi, bool distinct) {
  const std::size_t n = q.size();
  double s = 0.0;
  for_each_tuple(n, v, distinct, [&](const Tuple& t) {
    double w = 1.0;
    for (auto [a, b] : edges) w *= t[a] == t[b] ? 0.0 : q[t[a]][t[b]];
    if (w == 0.0) return;
    Tuple atoms(v);
    for (std::size_t a = 0; a < v; ++a) atoms[a] = x[t[a]];
    s += w * phi(atoms);
  });
  return s / std::pow(static_cast<double>(n), static_cast<double>(v));
}

// t(H, W, f) for a block kernel: integrate over block tuples.
inline double homomorphism_density(const Edges& edges, std::size_t v, const Mat& w, const Vec& widths, const Vec& f) {
  const std::size_t m = widths.size();
  double s = 0.0;
  for_each_tuple(m, v, false, [&](const Tuple& t) {
    double term = 1.0;
    for (std::size_t a = 0; a < v; ++a) term *= widths[t[a]] * f[t[a]];
    for (auto [a, b] : edges) term *= w[t[a]][t[b]];
    s += term;
  });
  return s;
}

// Cut norm of a block kernel: max over row block subsets S and column block subsets T of
// |sum_{i in S, j in T} area(i, j) W(i, j)|. Enumerates both sides (4^m).
inline double cut_norm(const Mat& w, const Vec& widths) {
  const std::size_t m = widths.size();
  double best = 0.0;
  for (std::uint64_t s = 0; s < (1ULL << m); ++s)
    for (std::uint64_t t = 0; t < (1ULL << m); ++t) {
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        if (s >> i & 1)
          for (std::size_t j = 0; j < m; ++j)
            if (t >> j & 1) sum += widths[i] * widths[j] * w[i][j];
      best = std::max(best, std::abs(sum));
    }
  return best;
}

// Curie-Weiss: Z_n(theta) = n^-1 log sum_k C(n,k) 2^-n exp(theta (M^2 - n) / n), M = 2k - n.
inline double curie_weiss_logz(std::size_t n, double theta) {
  Vec terms;
  for (std::size_t k = 0; k <= n; ++k) {
    const double m = 2.0 * k - static_cast<double>(n);
    terms.push_back(log_binomial(n, k) - n * std::log(2.0) + theta * (m * m - n) / n);
  }
  return log_sum_exp(terms) / n;
}

// Three-color Potts on the complete graph: U = (sum_r n_r^2 - n) / n^2 under uniform colors.
inline double potts3_logz(std::size_t n, double theta) {
  Vec terms;
  for (std::size_t a = 0; a <= n; ++a)
    for (std::size_t b = 0; a + b <= n; ++b) {
      const std::size_t c = n - a - b;
      const double lw = std::lgamma(n + 1.0) - std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(c + 1.0) -
                        n * std::log(3.0);
      const double u = (double(a) * a + double(b) * b + double(c) * c - n) / (double(n) * n);
      terms.push_back(lw + n * theta * u);
    }
  return log_sum_exp(terms) / n;
}

// Brute-force Z_n over all k^n states for a K2 model with coupling q and phi(a, b).
inline double k2_logz(const Mat& q, const Vec& probs, const std::function<double(std::size_t, std::size_t)>& phi,
                      double theta) {
  const std::size_t n = q.size(), k = probs.size();
  std::size_t states = 1;
  for (std::size_t i = 0; i < n; ++i) states *= k;
  Vec terms;
  std::vector<std::size_t> x(n);
  for (std::size_t s = 0; s < states; ++s) {
    std::size_t r = s;
    double lw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = r % k;
      r /= k;
      lw += std::log(probs[x[i]]);
    }
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) u += q[i][j] * phi(x[i], x[j]);
    u /= double(n) * n;
    terms.push_back(lw + n * theta * u);
  }
  return log_sum_exp(terms) / n;
}

// Rademacher entropy cost: gamma(m) = ((1+m) log(1+m) + (1-m) log(1-m)) / 2.
inline double rademacher_gamma(double m) {
  auto xlx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  return 0.5 * (xlx(1.0 + m) + xlx(1.0 - m));
}

// Curie-Weiss limit sup_m theta m^2 - gamma(m): the positive root of m = tanh(2 theta m) by
// bisection, compared against m = 0.
inline double curie_weiss_limit(double theta, double* magnetization = nullptr) {
  double best_m = 0.0;
  if (theta > 0.5) {
    double lo = 1e-12, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (std::tanh(2.0 * theta * mid) > mid ? lo : hi) = mid;
    }
    best_m = 0.5 * (lo + hi);
  }
  if (magnetization) *magnetization = best_m;
  return theta * best_m * best_m - rademacher_gamma(best_m);
}

// Rate of the Curie-Weiss edge statistic: I(t) = gamma(sqrt t) for t in [0, 1].
inline double curie_weiss_rate(double t) { return rademacher_gamma(std::sqrt(t)); }

inline double total_variation(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace oracle
