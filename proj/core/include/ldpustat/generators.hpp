#pragma once

#include <cstddef>
#include <cstdint>

#include "ldpustat/kernel.hpp"
#include "ldpustat/matrix.hpp"

namespace ldpustat {

/// Q(i, j) = 1 for i != j: the mean-field (Curie-Weiss / complete graph) coupling.
SymmetricMatrix complete_coupling(std::size_t n);

/// 0/1 adjacency of G(n, p) with zero diagonal.
SymmetricMatrix erdos_renyi_adjacency(std::size_t n, double p, std::uint64_t seed);

/// Q(i, j) = B_ij (i j / n^2)^{-alpha} with B_ij iid Bernoulli(1/2) above the diagonal,
/// indices 1-based, zero diagonal.
SymmetricMatrix power_law_coupling(std::size_t n, double alpha, std::uint64_t seed);

/// Uniform m-block discretization of W(x, y) = (xy)^{-alpha} / 2 by exact block averages.
StepKernel power_law_limit(std::size_t m, double alpha);

}  // namespace ldpustat
