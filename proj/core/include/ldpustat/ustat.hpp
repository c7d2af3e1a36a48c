#pragma once

#include <cstddef>
#include <vector>

#include "ldpustat/matrix.hpp"
#include "ldpustat/motif.hpp"
#include "ldpustat/phi.hpp"

namespace ldpustat {

enum class Statistic { u, v };

/// V_n = n^-v sum over all of [n]^v of phi(x_{i_1}, ..., x_{i_v}) prod_{(a,b) in E} Q(i_a, i_b).
/// Direct enumeration; the diagonal of Q is read as zero.
double v_statistic(const Motif& h, const SymmetricMatrix& q, const DataVector& x, const PhiKernel& phi);

/// Same sum restricted to tuples of distinct indices, still normalized by n^-v.
double u_statistic(const Motif& h, const SymmetricMatrix& q, const DataVector& x, const PhiKernel& phi);

/// Leaf-elimination V_n for forest motifs with separable phi, O(v n^2 channels).
/// Throws InvalidArgument when the motif is not a forest or phi is not separable.
double v_statistic_tree(const Motif& h, const SymmetricMatrix& q, const DataVector& x, const PhiKernel& phi);

/// |U_n - V_n|.
double uv_gap(const Motif& h, const SymmetricMatrix& q, const DataVector& x, const PhiKernel& phi);

double statistic(Statistic kind, const Motif& h, const SymmetricMatrix& q, const DataVector& x,
                 const PhiKernel& phi);

/// Local field at `site`: for each atom a, n^{1-v} times the sum of the terms of the
/// statistic whose tuples touch `site`, with x_site set to a. Terms not touching the site
/// do not depend on x_site, so S(x^{site=a}) - S(x^{site=b}) = (field[a] - field[b]) / n
/// exactly, and the single-site Gibbs conditional is proportional to mu_a exp(theta field[a]).
std::vector<double> local_field(const Motif& h, const SymmetricMatrix& q, const DataVector& x,
                                const PhiKernel& phi, std::size_t site, Statistic kind = Statistic::v);

}  // namespace ldpustat
