#include "ldpustat/phi.hpp"

#include <cmath>
#include <limits>

#include "ldpustat/errors.hpp"
#include "ldpustat/random.hpp"

namespace ldpustat {

namespace {

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base)
      throw LimitExceeded("phi table size overflows");
    out *= base;
  }
  return out;
}

}  // namespace

PhiKernel PhiKernel::product(std::size_t arity, std::vector<double> atoms) {
  if (arity < 1) throw InvalidArgument("PhiKernel: arity must be positive");
  PhiKernel k;
  k.kind_ = PhiKind::product;
  k.arity_ = arity;
  k.atoms_ = atoms.size();
  k.envelope_.resize(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) k.envelope_[i] = std::abs(atoms[i]);
  k.values_ = std::move(atoms);
  return k;
}

PhiKernel PhiKernel::monochrome(std::size_t arity, std::size_t colors) {
  if (arity < 1) throw InvalidArgument("PhiKernel: arity must be positive");
  PhiKernel k;
  k.kind_ = PhiKind::monochrome;
  k.arity_ = arity;
  k.atoms_ = colors;
  k.envelope_.assign(colors, 1.0);
  return k;
}

PhiKernel PhiKernel::table(std::size_t arity, std::size_t atoms, std::vector<double> values,
                           std::vector<double> envelope, double tail_exponent) {
  if (arity < 1) throw InvalidArgument("PhiKernel: arity must be positive");
  if (values.size() != checked_power(atoms, arity)) throw InvalidArgument("PhiKernel: table must have atoms^arity entries");
  if (envelope.size() != atoms) throw InvalidArgument("PhiKernel: envelope must have one entry per atom");
  PhiKernel k;
  k.kind_ = PhiKind::table;
  k.arity_ = arity;
  k.atoms_ = atoms;
  k.values_ = std::move(values);
  k.envelope_ = std::move(envelope);
  k.tail_exponent_ = tail_exponent;
  return k;
}

PhiKernel PhiKernel::table(std::size_t arity, std::size_t atoms, std::vector<double> values) {
  double top = 0.0;
  for (double v : values) top = std::max(top, std::abs(v));
  const double psi = std::pow(top, 1.0 / static_cast<double>(arity));
  return table(arity, atoms, std::move(values), std::vector<double>(atoms, psi));
}

PhiKernel PhiKernel::callback(std::size_t arity, std::size_t atoms, Callback fn, std::vector<double> envelope,
                              double tail_exponent) {
  if (arity < 1) throw InvalidArgument("PhiKernel: arity must be positive");
  if (!fn) throw InvalidArgument("PhiKernel: empty callback");
  if (envelope.size() != atoms) throw InvalidArgument("PhiKernel: envelope must have one entry per atom");
  PhiKernel k;
  k.kind_ = PhiKind::callback;
  k.arity_ = arity;
  k.atoms_ = atoms;
  k.callback_ = std::move(fn);
  k.envelope_ = std::move(envelope);
  k.tail_exponent_ = tail_exponent;
  return k;
}

PhiKernel PhiKernel::tabulate(const PhiKernel& phi) {
  const std::size_t total = checked_power(phi.atoms_, phi.arity_);
  std::vector<double> values(total);
  std::vector<std::size_t> idx(phi.arity_, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t a = phi.arity_; a-- > 0;) {
      idx[a] = rest % phi.atoms_;
      rest /= phi.atoms_;
    }
    values[flat] = phi(idx);
  }
  return table(phi.arity_, phi.atoms_, std::move(values), phi.envelope_, phi.tail_exponent_);
}

std::string PhiKernel::name() const {
  switch (kind_) {
    case PhiKind::product: return "product";
    case PhiKind::monochrome: return "monochrome";
    case PhiKind::table: return "table";
    case PhiKind::callback: return "callback";
  }
  return "unknown";
}

double PhiKernel::operator()(std::span<const std::size_t> idx) const {
  switch (kind_) {
    case PhiKind::product: {
      double p = 1.0;
      for (std::size_t i : idx) p *= values_[i];
      return p;
    }
    case PhiKind::monochrome: {
      for (std::size_t i : idx)
        if (i != idx[0]) return 0.0;
      return 1.0;
    }
    case PhiKind::table: {
      std::size_t flat = 0;
      for (std::size_t i : idx) flat = flat * atoms_ + i;
      return values_[flat];
    }
    case PhiKind::callback: return callback_(idx);
  }
  return 0.0;
}

std::vector<std::vector<double>> PhiKernel::channels() const {
  if (kind_ == PhiKind::product) return {values_};
  if (kind_ == PhiKind::monochrome) {
    std::vector<std::vector<double>> out(atoms_, std::vector<double>(atoms_, 0.0));
    for (std::size_t r = 0; r < atoms_; ++r) out[r][r] = 1.0;
    return out;
  }
  return {};
}

bool PhiKernel::envelope_holds(std::size_t exhaustive_limit, std::size_t samples, std::uint64_t seed) const {
  const auto check = [&](std::span<const std::size_t> idx) {
    double bound = 1.0;
    for (std::size_t i : idx) bound *= envelope_[i];
    return std::abs((*this)(idx)) <= bound * (1.0 + 1e-12) + 1e-300;
  };
  std::vector<std::size_t> idx(arity_, 0);
  std::size_t total = 0;
  bool exhaustive = true;
  try {
    total = checked_power(atoms_, arity_);
    exhaustive = total <= exhaustive_limit;
  } catch (const LimitExceeded&) {
    exhaustive = false;
  }
  if (exhaustive) {
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      for (std::size_t a = arity_; a-- > 0;) {
        idx[a] = rest % atoms_;
        rest /= atoms_;
      }
      if (!check(idx)) return false;
    }
    return true;
  }
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& i : idx) i = rng.below(atoms_);
    if (!check(idx)) return false;
  }
  return true;
}

void DataVector::validate(std::size_t atom_count) const {
  for (std::size_t i = 0; i < indices.size(); ++i)
    if (indices[i] >= atom_count)
      throw InvalidArgument("DataVector: entry " + std::to_string(i) + " has atom index " +
                            std::to_string(indices[i]) + " >= " + std::to_string(atom_count));
}

}  // namespace ldpustat
