#include "ldpustat/generators.hpp"

#include <cmath>

#include "ldpustat/errors.hpp"
#include "ldpustat/random.hpp"

namespace ldpustat {

SymmetricMatrix complete_coupling(std::size_t n) {
  Matrix q(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) q(i, i) = 0.0;
  return SymmetricMatrix(std::move(q));
}

SymmetricMatrix erdos_renyi_adjacency(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("erdos_renyi_adjacency: p must lie in [0, 1]");
  Rng rng(seed);
  Matrix g(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i) = rng.bernoulli(p) ? 1.0 : 0.0;
  return SymmetricMatrix(std::move(g));
}

SymmetricMatrix power_law_coupling(std::size_t n, double alpha, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("power_law_coupling: alpha must lie in (0, 1)");
  Rng rng(seed);
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  Matrix q(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(0.5))
        q(i, j) = q(j, i) = std::pow(static_cast<double>(i + 1) * static_cast<double>(j + 1) / n2, -alpha);
  return SymmetricMatrix(std::move(q));
}

StepKernel power_law_limit(std::size_t m, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("power_law_limit: alpha must lie in (0, 1)");
  const double md = static_cast<double>(m);
  std::vector<double> avg(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double hi = std::pow(static_cast<double>(i + 1) / md, 1.0 - alpha);
    const double lo = std::pow(static_cast<double>(i) / md, 1.0 - alpha);
    avg[i] = md * (hi - lo) / (1.0 - alpha);
  }
  Matrix w(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) w(i, j) = 0.5 * avg[i] * avg[j];
  return StepKernel::uniform(std::move(w));
}

}  // namespace ldpustat
