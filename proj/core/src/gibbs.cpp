#include "ldpustat/gibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>

#include "ldpustat/errors.hpp"
#include "ldpustat/generators.hpp"
#include "ldpustat/parallel.hpp"
#include "ldpustat/random.hpp"

namespace ldpustat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailSlack = 1e-12;

// Running log-sum-exp.
class LogSum {
 public:
  void add(double x) {
    if (x == -kInf) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  double value() const { return max_ == -kInf ? -kInf : max_ + std::log(sum_); }

 private:
  double max_ = -kInf;
  double sum_ = 0.0;
};

double log_sum_exp(const std::vector<double>& xs) {
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  std::vector<double> e(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) e[i] = std::exp(xs[i] - m);
  return m + std::log(pairwise_sum(e.data(), e.size()));
}

double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// All compositions of `total` into k ordered parts.
void compositions(std::size_t total, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> comp(k, 0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == k) {
      comp[pos] = left;
      out.push_back(comp);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      comp[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, total);
}

double binomial_count(std::size_t n, std::size_t k) {  // C(n + k - 1, k - 1) as a double
  double c = 1.0;
  for (std::size_t i = 1; i < k; ++i) c = c * static_cast<double>(n + i) / static_cast<double>(i);
  return c;
}

std::vector<double> conditional_from_field(const FiniteBaseMeasure& mu, double theta, const std::vector<double>& field) {
  const std::size_t k = mu.size();
  std::vector<double> p(k);
  double shift = -kInf;
  for (std::size_t a = 0; a < k; ++a) shift = std::max(shift, std::log(mu.prob(a)) + theta * field[a]);
  double s = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    p[a] = std::exp(std::log(mu.prob(a)) + theta * field[a] - shift);
    s += p[a];
  }
  for (double& x : p) x /= s;
  return p;
}

std::size_t raw_state_count(std::size_t n, std::size_t k, std::size_t limit) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > limit / k) throw LimitExceeded("state space " + std::to_string(k) + "^" + std::to_string(n) +
                                               " exceeds the enumeration limit of " + std::to_string(limit));
    total *= k;
  }
  return total;
}

std::size_t encode_state(const DataVector& x, std::size_t k) {
  std::size_t s = 0;
  for (std::size_t i = x.size(); i-- > 0;) s = s * k + x[i];
  return s;
}

void fnv(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

// Heat-bath chain state with an incrementally maintained statistic. For K2 with separable
// phi the local field is (2/n) sum_c g_c(a) H_c(site) with cached H_c(s) = sum_j Q(s,j) g_c(x_j).
class Chain {
 public:
  Chain(const GibbsModel& model, std::uint64_t seed) : model_(model), rng_(seed), n_(model.n()) {
    const auto& mu = model.mu();
    x_.indices.resize(n_);
    for (auto& xi : x_.indices) {
      const double u = rng_.uniform();
      double c = 0.0;
      xi = mu.size() - 1;
      for (std::size_t a = 0; a < mu.size(); ++a) {
        c += mu.prob(a);
        if (u < c) {
          xi = a;
          break;
        }
      }
    }
    fast_ = model.motif().is_edge() && model.phi().separable();
    if (fast_) channels_ = model.phi().channels();
    recompute();
  }

  bool fast() const { return fast_; }
  const DataVector& state() const { return x_; }
  double current() const { return current_; }

  std::vector<double> field(std::size_t site) const {
    if (!fast_) return local_field(model_.motif(), model_.q(), x_, model_.phi(), site, model_.statistic_kind());
    const std::size_t k = model_.mu().size();
    std::vector<double> f(k, 0.0);
    const double scale = 2.0 / static_cast<double>(n_);
    for (std::size_t c = 0; c < channels_.size(); ++c) {
      const double hc = cache_[c][site];
      for (std::size_t a = 0; a < k; ++a) f[a] += channels_[c][a] * hc;
    }
    for (double& v : f) v *= scale;
    return f;
  }

  void update(std::size_t site) {
    const auto f = field(site);
    const auto p = conditional_from_field(model_.mu(), model_.theta(), f);
    const double u = rng_.uniform();
    std::size_t a = p.size() - 1;
    double c = 0.0;
    for (std::size_t b = 0; b < p.size(); ++b) {
      c += p[b];
      if (u < c) {
        a = b;
        break;
      }
    }
    const std::size_t old = x_[site];
    if (a == old) return;
    current_ += (f[a] - f[old]) / static_cast<double>(n_);
    if (fast_) {
      // the model's Q has a zero diagonal, so the raw row is the coupling row
      const auto row = model_.q().dense().row(site);
      for (std::size_t ch = 0; ch < channels_.size(); ++ch) {
        const double d = channels_[ch][a] - channels_[ch][old];
        if (d == 0.0) continue;
        auto& cache = cache_[ch];
        for (std::size_t j = 0; j < n_; ++j) cache[j] += row[j] * d;
      }
    }
    x_.indices[site] = a;
  }

  void sweep() {
    for (std::size_t i = 0; i < n_; ++i) update(i);
  }

  // Full recomputation through the reference statistic; returns the drift it removed.
  double recompute() {
    const double exact = model_.statistic(x_);
    const double drift = std::abs(exact - current_);
    current_ = exact;
    if (fast_) {
      cache_.assign(channels_.size(), std::vector<double>(n_, 0.0));
      for (std::size_t ch = 0; ch < channels_.size(); ++ch)
        for (std::size_t s = 0; s < n_; ++s) {
          double h = 0.0;
          for (std::size_t j = 0; j < n_; ++j) h += model_.q().coupling(s, j) * channels_[ch][x_[j]];
          cache_[ch][s] = h;
        }
    }
    return drift;
  }

 private:
  const GibbsModel& model_;
  Rng rng_;
  std::size_t n_;
  DataVector x_;
  double current_ = 0.0;
  bool fast_ = false;
  std::vector<std::vector<double>> channels_;
  std::vector<std::vector<double>> cache_;
};

template <class Observer>
ChainMetadata run_chain(const GibbsModel& model, const ChainConfig& cfg, Observer&& observe, DataVector* final_state) {
  cfg.validate();
  Chain chain(model, cfg.seed);
  ChainMetadata meta;
  meta.seed = cfg.seed;
  meta.sweeps = cfg.sweeps;
  meta.burn_in = cfg.burn_in;
  meta.thin = cfg.thin;
  meta.blocks = cfg.blocks;
  meta.model_hash = model.hash();
  meta.fast_path = chain.fast();
  const std::size_t total = cfg.burn_in + cfg.sweeps;
  for (std::size_t s = 1; s <= total; ++s) {
    chain.sweep();
    if (s % cfg.recompute_interval == 0) {
      const double drift = chain.recompute();
      meta.max_drift = std::max(meta.max_drift, drift);
      if (drift > cfg.drift_tolerance * std::max(1.0, std::abs(chain.current())))
        throw Error("glauber_chain: cached statistic drifted by " + std::to_string(drift) + " at sweep " +
                    std::to_string(s));
    }
    if (s > cfg.burn_in && (s - cfg.burn_in) % cfg.thin == 0) observe(s, chain.state(), chain.current());
  }
  if (final_state) *final_state = chain.state();
  return meta;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

}  // namespace

GibbsModel::GibbsModel(Motif motif, SymmetricMatrix q, PhiKernel phi, FiniteBaseMeasure mu, double theta,
                       Statistic statistic)
    : motif_(std::move(motif)), q_(q.with_zero_diagonal()), phi_(std::move(phi)), mu_(std::move(mu)), theta_(theta),
      statistic_(statistic) {
  if (phi_.arity() != motif_.vertices()) throw InvalidArgument("GibbsModel: phi arity does not match the motif");
  if (phi_.atom_count() != mu_.size()) throw InvalidArgument("GibbsModel: phi and mu use different atom counts");
  if (!std::isfinite(theta_)) throw InvalidArgument("GibbsModel: theta must be finite");
  if (statistic_ == Statistic::u && q_.size() < motif_.vertices())
    throw InvalidArgument("GibbsModel: need n >= v sites for the U statistic");
}

GibbsModel GibbsModel::ising_complete(std::size_t n, double theta) {
  return ising_complete(n, theta, FiniteBaseMeasure::rademacher());
}

GibbsModel GibbsModel::ising_complete(std::size_t n, double theta, const FiniteBaseMeasure& mu) {
  return GibbsModel(Motif::edge(), complete_coupling(n), PhiKernel::product(2, mu.atoms()), mu, theta);
}

GibbsModel GibbsModel::potts_complete(std::size_t n, std::size_t c, double theta) {
  return GibbsModel(Motif::edge(), complete_coupling(n), PhiKernel::monochrome(2, c),
                    FiniteBaseMeasure::uniform_colors(c), theta);
}

GibbsModel GibbsModel::with_theta(double theta) const {
  GibbsModel m = *this;
  if (!std::isfinite(theta)) throw InvalidArgument("GibbsModel: theta must be finite");
  m.theta_ = theta;
  return m;
}

double GibbsModel::statistic(const DataVector& x) const { return ldpustat::statistic(statistic_, motif_, q_, x, phi_); }

std::string GibbsModel::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::string motif = motif_.to_text();
  fnv(h, motif.data(), motif.size());
  const std::size_t n = q_.size();
  fnv(h, &n, sizeof n);
  fnv(h, q_.dense().data().data(), q_.dense().data().size() * sizeof(double));
  const std::string phi = phi_.name();
  fnv(h, phi.data(), phi.size());
  // Fold in phi's values on every atom tuple when that is cheap.
  const std::size_t k = phi_.atom_count(), v = phi_.arity();
  double tuples = std::pow(static_cast<double>(k), static_cast<double>(v));
  if (tuples <= 65536.0) {
    std::vector<std::size_t> idx(v, 0);
    for (std::size_t t = 0; t < static_cast<std::size_t>(tuples); ++t) {
      const double val = phi_(idx);
      fnv(h, &val, sizeof val);
      for (std::size_t a = v; a-- > 0;) {
        if (++idx[a] < k) break;
        idx[a] = 0;
      }
    }
  }
  fnv(h, mu_.atoms().data(), mu_.size() * sizeof(double));
  fnv(h, mu_.probs().data(), mu_.size() * sizeof(double));
  fnv(h, &theta_, sizeof theta_);
  const int kind = statistic_ == Statistic::u ? 0 : 1;
  fnv(h, &kind, sizeof kind);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::vector<std::size_t>> twin_classes(const SymmetricMatrix& q) {
  const std::size_t n = q.size();
  std::vector<std::size_t> label(n, n);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != n) continue;
    label[i] = classes.size();
    classes.push_back({i});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (label[j] != n) continue;
      bool twin = true;
      for (std::size_t k = 0; k < n && twin; ++k)
        if (k != i && k != j && q.coupling(i, k) != q.coupling(j, k)) twin = false;
      if (twin) {
        label[j] = label[i];
        classes.back().push_back(j);
      }
    }
  }
  return classes;
}

StateTable enumerate_states(const GibbsModel& model, const EnumerationOptions& options) {
  const std::size_t n = model.n(), k = model.mu().size();
  std::vector<std::vector<std::size_t>> classes;
  if (options.reduce_twins) {
    classes = twin_classes(model.q());
  } else {
    for (std::size_t i = 0; i < n; ++i) classes.push_back({i});
  }
  // Per class: every atom-count vector with its log multiplicity times log mu-weight.
  std::vector<std::vector<std::vector<std::size_t>>> comps(classes.size());
  std::vector<std::vector<double>> comp_logw(classes.size());
  double total = 1.0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    total *= binomial_count(classes[c].size(), k);
    if (total > static_cast<double>(options.limit))
      throw LimitExceeded("enumeration needs more than " + std::to_string(options.limit) +
                          " states; raise the limit or use a smaller n");
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    compositions(classes[c].size(), k, comps[c]);
    for (const auto& comp : comps[c]) {
      double lw = log_factorial(classes[c].size());
      for (std::size_t a = 0; a < k; ++a)
        lw += -log_factorial(comp[a]) + static_cast<double>(comp[a]) * std::log(model.mu().prob(a));
      comp_logw[c].push_back(lw);
    }
  }
  const std::size_t states = static_cast<std::size_t>(total);
  StateTable table;
  table.reduced = options.reduce_twins;
  table.log_weight.resize(states);
  table.statistic.resize(states);
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (states + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t chunk) {
    DataVector x;
    x.indices.resize(n);
    const std::size_t end = std::min(states, (chunk + 1) * kChunk);
    for (std::size_t s = chunk * kChunk; s < end; ++s) {
      std::size_t rest = s;
      double lw = 0.0;
      for (std::size_t c = 0; c < classes.size(); ++c) {
        const std::size_t pick = rest % comps[c].size();
        rest /= comps[c].size();
        lw += comp_logw[c][pick];
        std::size_t pos = 0;
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t r = 0; r < comps[c][pick][a]; ++r) x.indices[classes[c][pos++]] = a;
      }
      table.log_weight[s] = lw;
      table.statistic[s] = model.statistic(x);
    }
  });
  return table;
}

double exact_logz(const GibbsModel& model, const EnumerationOptions& options) {
  if (model.theta() == 0.0) return 0.0;
  const auto table = enumerate_states(model, options);
  const double n = static_cast<double>(model.n());
  std::vector<double> terms(table.log_weight.size());
  for (std::size_t s = 0; s < terms.size(); ++s) terms[s] = table.log_weight[s] + n * model.theta() * table.statistic[s];
  return log_sum_exp(terms) / n;
}

CompleteFamily parse_complete_family(std::string_view name) {
  if (name == "ising" || name == "multilinear") return CompleteFamily::ising;
  if (name == "potts") return CompleteFamily::potts;
  throw InvalidArgument("unknown complete-graph family '" + std::string(name) + "' (expected ising or potts)");
}

double exact_logz_complete(CompleteFamily family, std::size_t n, double theta, const FiniteBaseMeasure& mu,
                           std::size_t max_terms) {
  if (n < 2) throw InvalidArgument("exact_logz_complete: need n >= 2");
  if (!std::isfinite(theta)) throw InvalidArgument("exact_logz_complete: theta must be finite");
  if (theta == 0.0) return 0.0;
  const std::size_t k = mu.size();
  if (binomial_count(n, k) > static_cast<double>(max_terms))
    throw LimitExceeded("exact_logz_complete: too many type classes");
  const double nd = static_cast<double>(n);
  std::vector<double> log_p(k);
  for (std::size_t a = 0; a < k; ++a) log_p[a] = std::log(mu.prob(a));
  const double log_nfact = log_factorial(n);
  LogSum acc;
  std::vector<std::size_t> comp(k, 0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == k) {
      comp[pos] = left;
      double lw = log_nfact, u = 0.0;
      for (std::size_t a = 0; a < k; ++a) lw += -log_factorial(comp[a]) + static_cast<double>(comp[a]) * log_p[a];
      if (family == CompleteFamily::ising) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
          s1 += static_cast<double>(comp[a]) * mu.atom(a);
          s2 += static_cast<double>(comp[a]) * mu.atom(a) * mu.atom(a);
        }
        u = (s1 * s1 - s2) / (nd * nd);
      } else {
        double sq = 0.0;
        for (std::size_t a = 0; a < k; ++a) sq += static_cast<double>(comp[a]) * static_cast<double>(comp[a]);
        u = (sq - nd) / (nd * nd);
      }
      acc.add(lw + nd * theta * u);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      comp[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, n);
  return acc.value() / nd;
}

DataVector decode_state(std::size_t index, std::size_t n, std::size_t k) {
  DataVector x;
  x.indices.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    x.indices[i] = index % k;
    index /= k;
  }
  return x;
}

std::vector<double> exact_distribution(const GibbsModel& model, std::size_t limit) {
  const std::size_t n = model.n(), k = model.mu().size();
  const std::size_t states = raw_state_count(n, k, limit);
  std::vector<double> logp(states);
  for (std::size_t s = 0; s < states; ++s) {
    const DataVector x = decode_state(s, n, k);
    double lw = 0.0;
    for (std::size_t i = 0; i < n; ++i) lw += std::log(model.mu().prob(x[i]));
    logp[s] = lw + static_cast<double>(n) * model.theta() * model.statistic(x);
  }
  const double z = log_sum_exp(logp);
  for (double& v : logp) v = std::exp(v - z);
  return logp;
}

std::vector<double> heat_bath_sweep(const GibbsModel& model, const std::vector<double>& distribution) {
  const std::size_t n = model.n(), k = model.mu().size();
  if (distribution.size() != raw_state_count(n, k, distribution.size()))
    throw InvalidArgument("heat_bath_sweep: distribution size is not k^n");
  std::vector<double> cur = distribution;
  for (std::size_t site = 0; site < n; ++site) {
    std::vector<double> next(cur.size(), 0.0);
    for (std::size_t s = 0; s < cur.size(); ++s) {
      if (cur[s] == 0.0) continue;
      DataVector x = decode_state(s, n, k);
      const auto p = heat_bath_conditional(model, x, site);
      for (std::size_t a = 0; a < k; ++a) {
        x.indices[site] = a;
        next[encode_state(x, k)] += cur[s] * p[a];
      }
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> heat_bath_conditional(const GibbsModel& model, const DataVector& x, std::size_t site) {
  const auto f = local_field(model.motif(), model.q(), x, model.phi(), site, model.statistic_kind());
  return conditional_from_field(model.mu(), model.theta(), f);
}

void ChainConfig::validate() const {
  if (thin == 0) throw InvalidArgument("ChainConfig: thin must be positive");
  if (blocks == 0) throw InvalidArgument("ChainConfig: blocks must be positive");
  if (recompute_interval == 0) throw InvalidArgument("ChainConfig: recompute interval must be positive");
  if (!(drift_tolerance > 0.0)) throw InvalidArgument("ChainConfig: drift tolerance must be positive");
}

ChainRecord glauber_chain(const GibbsModel& model, const ChainConfig& cfg) {
  ChainRecord record;
  const std::size_t n = model.n(), k = model.mu().size();
  if (cfg.blocks > n) throw InvalidArgument("glauber_chain: more blocks than sites");
  record.metadata = run_chain(
      model, cfg,
      [&](std::size_t sweep, const DataVector& x, double u) {
        ChainSample s;
        s.sweep = sweep;
        s.u_n = u;
        s.block_means.assign(cfg.blocks, 0.0);
        std::vector<std::size_t> counts(cfg.blocks, 0);
        s.color_fracs.assign(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t b = i * cfg.blocks / n;
          s.block_means[b] += model.mu().atom(x[i]);
          ++counts[b];
          s.color_fracs[x[i]] += 1.0;
        }
        for (std::size_t b = 0; b < cfg.blocks; ++b) s.block_means[b] /= static_cast<double>(counts[b]);
        for (double& f : s.color_fracs) f /= static_cast<double>(n);
        record.samples.push_back(std::move(s));
      },
      &record.final_state);
  return record;
}

BatchMean batch_means(const std::vector<double>& values, std::size_t batches) {
  BatchMean out;
  if (values.empty()) return out;
  out.mean = pairwise_sum(values.data(), values.size()) / static_cast<double>(values.size());
  const std::size_t b = std::min(std::max<std::size_t>(batches, 2), values.size());
  if (b < 2) return out;
  const std::size_t size = values.size() / b;
  std::vector<double> means(b);
  for (std::size_t i = 0; i < b; ++i)
    means[i] = pairwise_sum(values.data() + i * size, size) / static_cast<double>(size);
  double m = 0.0;
  for (double x : means) m += x;
  m /= static_cast<double>(b);
  double var = 0.0;
  for (double x : means) var += (x - m) * (x - m);
  var /= static_cast<double>(b - 1);
  out.standard_error = std::sqrt(var / static_cast<double>(b));
  return out;
}

TiEstimate estimate_logz_ti(const GibbsModel& model, const std::vector<double>& theta_grid, const ChainConfig& cfg,
                            const TiOptions& options) {
  if (theta_grid.empty() || theta_grid.front() != 0.0)
    throw InvalidArgument("estimate_logz_ti: the grid must start at 0");
  for (std::size_t i = 1; i < theta_grid.size(); ++i)
    if (!(theta_grid[i] > theta_grid[i - 1])) throw InvalidArgument("estimate_logz_ti: the grid must increase strictly");
  cfg.validate();

  std::map<double, TiPoint> cache;
  auto evaluate = [&](const std::vector<double>& grid) {
    std::vector<double> todo;
    for (double t : grid)
      if (!cache.count(t)) todo.push_back(t);
    std::vector<TiPoint> fresh(todo.size());
    parallel_for(todo.size(), [&](std::size_t i) {
      ChainConfig c = cfg;
      c.seed = derive_seed(cfg.seed, std::bit_cast<std::uint64_t>(todo[i]));
      std::vector<double> us;
      us.reserve(cfg.sweeps / cfg.thin + 1);
      run_chain(model.with_theta(todo[i]), c, [&](std::size_t, const DataVector&, double u) { us.push_back(u); },
                nullptr);
      const auto bm = batch_means(us, options.batches);
      fresh[i] = TiPoint{todo[i], bm.mean, bm.standard_error};
    });
    for (auto& p : fresh) cache.emplace(p.theta, p);
  };

  auto assemble = [&](const std::vector<double>& grid) {
    TiEstimate est;
    std::vector<double> ys;
    for (double t : grid) {
      est.points.push_back(cache.at(t));
      ys.push_back(cache.at(t).mean_u);
    }
    est.value = trapezoid(grid, ys);
    double var = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double left = i > 0 ? grid[i] - grid[i - 1] : 0.0;
      const double right = i + 1 < grid.size() ? grid[i + 1] - grid[i] : 0.0;
      const double c = 0.5 * (left + right);
      var += c * c * est.points[i].standard_error * est.points[i].standard_error;
    }
    est.standard_error = std::sqrt(var);
    if (grid.size() >= 3) {
      std::vector<double> cx, cy;
      for (std::size_t i = 0; i < grid.size(); i += 2) {
        cx.push_back(grid[i]);
        cy.push_back(ys[i]);
      }
      if (cx.back() != grid.back()) {
        cx.push_back(grid.back());
        cy.push_back(ys.back());
      }
      est.truncation_error = std::abs(est.value - trapezoid(cx, cy)) / 3.0;
    }
    est.error = std::hypot(est.standard_error, est.truncation_error);
    return est;
  };

  std::vector<double> grid = theta_grid;
  evaluate(grid);
  TiEstimate est = assemble(grid);
  for (std::size_t r = 0; options.refine && r < options.max_refinements && est.truncation_error > options.target_error;
       ++r) {
    std::vector<double> finer;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      finer.push_back(grid[i]);
      finer.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    finer.push_back(grid.back());
    grid = std::move(finer);
    evaluate(grid);
    est = assemble(grid);
  }
  return est;
}

std::vector<TailPoint> tail_probability_exact(const std::function<GibbsModel(std::size_t)>& model_for_n, double t,
                                              const std::vector<std::size_t>& n_list,
                                              const EnumerationOptions& options) {
  std::vector<TailPoint> out;
  for (std::size_t n : n_list) {
    const GibbsModel model = model_for_n(n).with_theta(0.0);
    const auto table = enumerate_states(model, options);
    std::vector<double> hits;
    for (std::size_t s = 0; s < table.statistic.size(); ++s)
      if (table.statistic[s] >= t - kTailSlack) hits.push_back(table.log_weight[s]);
    TailPoint p;
    p.n = n;
    if (hits.empty()) {
      p.log_probability = -kInf;
      p.rate = kInf;
    } else {
      p.log_probability = std::min(0.0, log_sum_exp(hits));
      p.rate = -p.log_probability / static_cast<double>(n);
      if (p.rate == 0.0) p.rate = 0.0;  // no negative zero
    }
    out.push_back(p);
  }
  return out;
}

std::string TestFunction::name() const {
  char buf[64];
  if (kind == Kind::power)
    std::snprintf(buf, sizeof buf, "u^%g", parameter);
  else
    std::snprintf(buf, sizeof buf, "1{u<=%g}", parameter);
  return buf;
}

double TestFunction::integral(double a, double b) const {
  if (kind == Kind::power) return (std::pow(b, parameter + 1.0) - std::pow(a, parameter + 1.0)) / (parameter + 1.0);
  return std::max(0.0, std::min(b, parameter) - a);
}

std::vector<TestFunction> default_test_functions() {
  return {TestFunction::power(0), TestFunction::power(1), TestFunction::power(2),
          TestFunction::step(0.25), TestFunction::step(0.5), TestFunction::step(0.75)};
}

WeakLawReport weak_law_check(const GibbsModel& model, const std::vector<LimitProfile>& limits,
                             const std::vector<TestFunction>& tests, const ChainConfig& cfg, std::size_t chains) {
  if (limits.empty()) throw InvalidArgument("weak_law_check: no limit profiles given");
  if (tests.empty()) throw InvalidArgument("weak_law_check: no test functions given");
  if (chains == 0) throw InvalidArgument("weak_law_check: need at least one chain");
  for (const auto& f : limits) {
    if (f.breakpoints.size() != f.values.size() + 1 || f.values.empty() || f.breakpoints.front() != 0.0 ||
        f.breakpoints.back() != 1.0)
      throw InvalidArgument("weak_law_check: limit profile breakpoints do not match its values");
  }
  const std::size_t n = model.n(), ng = tests.size();
  // int f g for every limit and test; per-site weights int_{i/n}^{(i+1)/n} g.
  std::vector<std::vector<double>> limit_int(limits.size(), std::vector<double>(ng, 0.0));
  for (std::size_t l = 0; l < limits.size(); ++l)
    for (std::size_t g = 0; g < ng; ++g)
      for (std::size_t u = 0; u < limits[l].values.size(); ++u)
        limit_int[l][g] += limits[l].values[u] * tests[g].integral(limits[l].breakpoints[u], limits[l].breakpoints[u + 1]);
  std::vector<std::vector<double>> site_w(ng, std::vector<double>(n));
  for (std::size_t g = 0; g < ng; ++g)
    for (std::size_t i = 0; i < n; ++i)
      site_w[g][i] = tests[g].integral(static_cast<double>(i) / static_cast<double>(n),
                                       static_cast<double>(i + 1) / static_cast<double>(n));

  // Per chain: average over samples of per-test discrepancies and of the surrogate.
  std::vector<std::vector<double>> per_chain(chains, std::vector<double>(ng + 1, 0.0));
  std::vector<std::size_t> sample_counts(chains, 0);
  parallel_for(chains, [&](std::size_t c) {
    ChainConfig cc = cfg;
    cc.seed = derive_seed(cfg.seed, c);
    std::vector<double> emp(ng);
    run_chain(
        model, cc,
        [&](std::size_t, const DataVector& x, double) {
          for (std::size_t g = 0; g < ng; ++g) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += model.mu().atom(x[i]) * site_w[g][i];
            emp[g] = s;
          }
          double surrogate = kInf;
          for (std::size_t l = 0; l < limits.size(); ++l) {
            double worst = 0.0;
            for (std::size_t g = 0; g < ng; ++g) worst = std::max(worst, std::abs(emp[g] - limit_int[l][g]));
            surrogate = std::min(surrogate, worst);
          }
          for (std::size_t g = 0; g < ng; ++g) {
            double best = kInf;
            for (std::size_t l = 0; l < limits.size(); ++l) best = std::min(best, std::abs(emp[g] - limit_int[l][g]));
            per_chain[c][g] += best;
          }
          per_chain[c][ng] += surrogate;
          ++sample_counts[c];
        },
        nullptr);
    for (double& v : per_chain[c]) v /= static_cast<double>(std::max<std::size_t>(sample_counts[c], 1));
  });

  WeakLawReport report;
  report.chains = chains;
  for (std::size_t c = 0; c < chains; ++c) report.samples += sample_counts[c];
  auto summarize = [&](std::size_t col, double& mean, double& se) {
    mean = 0.0;
    for (std::size_t c = 0; c < chains; ++c) mean += per_chain[c][col];
    mean /= static_cast<double>(chains);
    se = 0.0;
    if (chains > 1) {
      double var = 0.0;
      for (std::size_t c = 0; c < chains; ++c) var += (per_chain[c][col] - mean) * (per_chain[c][col] - mean);
      se = std::sqrt(var / static_cast<double>(chains - 1) / static_cast<double>(chains));
    }
  };
  for (std::size_t g = 0; g < ng; ++g) {
    WeakLawEntry e;
    e.name = tests[g].name();
    summarize(g, e.discrepancy, e.standard_error);
    report.entries.push_back(e);
  }
  summarize(ng, report.surrogate, report.surrogate_error);
  return report;
}

}  // namespace ldpustat
