#pragma once

#include <cstddef>
#include <vector>

#include "ldpustat/kernel.hpp"
#include "ldpustat/matrix.hpp"
#include "ldpustat/motif.hpp"
#include "ldpustat/phi.hpp"
#include "ldpustat/tilt.hpp"

namespace ldpustat {

/// Joint law of (A, B) on [0,1] x atoms whose first marginal is Lebesgue: block u carries
/// mass widths[u] and conditional law rows(u, .) over the atoms.
struct BlockMeasure {
  std::vector<double> widths;
  Matrix rows;

  std::size_t blocks() const noexcept { return rows.rows(); }
  std::size_t atoms() const noexcept { return rows.cols(); }
  /// Throws InvalidArgument unless rows are probability vectors (tol 1e-12) and widths
  /// are positive and sum to 1.
  void validate() const;
};

/// Real tilt profile: one value per block, in [min atom, max atom].
using RealProfile = std::vector<double>;
/// Potts profile: m x c, each row a probability vector over colors.
using PottsProfile = Matrix;

/// rho = Lebesgue x mu on the given blocks.
BlockMeasure product_measure(const std::vector<double>& widths, const FiniteBaseMeasure& mu);

/// t(H, W, f) = int prod_{(a,b)} W(x_a, x_b) prod_a f_a(x_a) dx, with f_a given per block.
double t_motif(const Motif& h, const StepKernel& w, const std::vector<std::vector<double>>& f);
double t_motif_bruteforce(const Motif& h, const StepKernel& w, const std::vector<std::vector<double>>& f);

inline constexpr std::size_t kDefaultTableLimit = std::size_t{1} << 16;

/// T_{W,phi}(nu) = E_nu[phi(B_1..B_v) prod W(A_a, A_b)] over v iid draws from nu.
/// Separable phi reduces to one t_motif per channel; other kernels enumerate atom tuples
/// and throw LimitExceeded when atoms^v exceeds `table_limit`.
double t_functional(const Motif& h, const StepKernel& w, const BlockMeasure& nu, const PhiKernel& phi,
                    std::size_t table_limit = kDefaultTableLimit);

/// Density of the derivative of T in nu: grad(u, x) = (1 / widths[u]) dT / dnu_u(x).
Matrix t_functional_gradient(const Motif& h, const StepKernel& w, const BlockMeasure& nu, const PhiKernel& phi,
                             std::size_t table_limit = kDefaultTableLimit);

/// G_1(f) = t(H, W, f, ..., f).
double g1(const Motif& h, const StepKernel& w, const RealProfile& f);
/// G_2(f) = sum_r t(H, W, f_r, ..., f_r).
double g2(const Motif& h, const StepKernel& w, const PottsProfile& f);

/// Derivative density of G_1: grad[u] = sum_a int prod W prod_{b != a} f with x_a in block u
/// held fixed. The derivative in the block value f[u] is widths[u] * grad[u].
std::vector<double> g1_gradient(const Motif& h, const StepKernel& w, const RealProfile& f);
/// Same per color channel; an m x c matrix.
Matrix g2_gradient(const Motif& h, const StepKernel& w, const PottsProfile& f);

/// Xi_1: block u gets mu tilted to mean f[u]; endpoint values give point masses.
/// Values within cfg.boundary_margin (relative) outside the atom range are clamped.
BlockMeasure lift_xi1(const FiniteBaseMeasure& mu, const std::vector<double>& widths, const RealProfile& f,
                      const TiltSolverConfig& cfg = {});
/// Xi_2: block u gets the color law f(u, .).
BlockMeasure lift_xi2(const std::vector<double>& widths, const PottsProfile& f);

/// D(nu | rho) = sum_u widths[u] D(nu_u || mu).
double divergence(const BlockMeasure& nu, const FiniteBaseMeasure& mu);

/// int gamma(f) = D(Xi_1(f) | rho), evaluated block by block through the tilt module.
double gamma_integral(const FiniteBaseMeasure& mu, const std::vector<double>& widths, const RealProfile& f,
                      const TiltSolverConfig& cfg = {});
/// sum_u widths[u] D(f(u, .) || mu).
double potts_penalty(const FiniteBaseMeasure& mu, const std::vector<double>& widths, const PottsProfile& f);

/// Validates a Potts profile (nonnegative rows summing to 1 within 1e-12).
void validate_potts_profile(const PottsProfile& f, std::size_t colors);

}  // namespace ldpustat
