#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ldpustat/matrix.hpp"
#include "ldpustat/motif.hpp"

namespace ldpustat {

/// Weighted homomorphism sums of a motif into a finite weighted kernel:
///
///   S = sum_{u in [m]^v} prod_a weight[u_a] f_a[u_a] prod_{(a,b) in E} K(u_a, u_b).
///
/// With weight = block widths this is t(H, W, f) for a step kernel; with weight = 1/n and
/// K = Q it is the V-statistic of a separable kernel. Forests are contracted by leaf
/// elimination in O(v m^2); other motifs fall back to the m^v enumeration.
double motif_sum(const Motif& h, const Matrix& k, std::span<const double> weight,
                 const std::vector<std::vector<double>>& f);
double motif_sum_bruteforce(const Motif& h, const Matrix& k, std::span<const double> weight,
                            const std::vector<std::vector<double>>& f);

/// P_a(u): the same sum with vertex a pinned to u and its own weight[u] f_a[u] factor left
/// out, so that S = sum_u weight[u] f_a[u] P_a(u).
std::vector<double> motif_pinned(const Motif& h, const Matrix& k, std::span<const double> weight,
                                 const std::vector<std::vector<double>>& f, std::size_t a);
std::vector<double> motif_pinned_bruteforce(const Motif& h, const Matrix& k, std::span<const double> weight,
                                            const std::vector<std::vector<double>>& f, std::size_t a);

/// sum_a P_a with every f_a = f: the functional derivative of the symmetric sum in f.
std::vector<double> motif_gradient(const Motif& h, const Matrix& k, std::span<const double> weight,
                                   std::span<const double> f);

}  // namespace ldpustat
