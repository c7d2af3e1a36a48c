#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ldpustat {

enum class PhiKind { product, monochrome, table, callback };

/// Kernel phi(x_1, ..., x_v) over atom indices of a finite base measure, together with
/// the envelope psi (|phi| <= prod psi(x_a)) and its tail exponent p.
class PhiKernel {
 public:
  using Callback = std::function<double(std::span<const std::size_t>)>;

  /// prod_a atoms[x_a]; envelope psi = |atom|.
  static PhiKernel product(std::size_t arity, std::vector<double> atoms);
  /// 1{x_1 = ... = x_v} over `colors` labels; envelope psi = 1.
  static PhiKernel monochrome(std::size_t arity, std::size_t colors);
  /// Row-major table over [atoms]^arity (first index slowest).
  static PhiKernel table(std::size_t arity, std::size_t atoms, std::vector<double> values,
                         std::vector<double> envelope,
                         double tail_exponent = std::numeric_limits<double>::infinity());
  /// Table with the constant envelope max|phi|^{1/v}, which always dominates.
  static PhiKernel table(std::size_t arity, std::size_t atoms, std::vector<double> values);
  static PhiKernel callback(std::size_t arity, std::size_t atoms, Callback fn, std::vector<double> envelope,
                            double tail_exponent = std::numeric_limits<double>::infinity());
  /// Tabulates any kernel; used to force the generic (non-separable) code paths.
  static PhiKernel tabulate(const PhiKernel& phi);

  PhiKind kind() const noexcept { return kind_; }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t atom_count() const noexcept { return atoms_; }
  const std::vector<double>& envelope() const noexcept { return envelope_; }
  double tail_exponent() const noexcept { return tail_exponent_; }
  std::string name() const;

  double operator()(std::span<const std::size_t> idx) const;

  /// Separable kernels are sums over channels of prod_a g(x_a).
  bool separable() const noexcept { return kind_ == PhiKind::product || kind_ == PhiKind::monochrome; }
  /// Channel functions g_c over atom indices (empty when not separable).
  std::vector<std::vector<double>> channels() const;

  /// Checks |phi| <= prod psi: exhaustively if atoms^arity <= exhaustive_limit, else on
  /// `samples` random tuples.
  bool envelope_holds(std::size_t exhaustive_limit = 1u << 20, std::size_t samples = 100000,
                      std::uint64_t seed = 1) const;

 private:
  PhiKernel() = default;

  PhiKind kind_ = PhiKind::product;
  std::size_t arity_ = 0;
  std::size_t atoms_ = 0;
  std::vector<double> values_;  // product: atom values; table: the table
  Callback callback_;
  std::vector<double> envelope_;
  double tail_exponent_ = std::numeric_limits<double>::infinity();
};

/// Data vector of atom indices.
struct DataVector {
  std::vector<std::size_t> indices;

  std::size_t size() const noexcept { return indices.size(); }
  std::size_t operator[](std::size_t i) const { return indices[i]; }
  /// Throws InvalidArgument if an index is >= atom_count.
  void validate(std::size_t atom_count) const;
};

}  // namespace ldpustat
