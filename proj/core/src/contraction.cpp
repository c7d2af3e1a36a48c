#include "ldpustat/contraction.hpp"

#include <limits>

#include "ldpustat/errors.hpp"

namespace ldpustat {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void check_inputs(const Motif& h, const Matrix& k, std::span<const double> weight,
                  const std::vector<std::vector<double>>& f) {
  const std::size_t m = k.rows();
  if (k.cols() != m) throw InvalidArgument("motif_sum: kernel must be square");
  if (weight.size() != m) throw InvalidArgument("motif_sum: weight size mismatch");
  if (f.size() != h.vertices()) throw InvalidArgument("motif_sum: need one function per motif vertex");
  for (const auto& fa : f)
    if (fa.size() != m) throw InvalidArgument("motif_sum: vertex function size mismatch");
}

// Depth-first enumeration of [m]^v with incremental edge products. Vertex `pinned` is held
// at `pinned_value` and contributes only its kernel factors.
struct Enumerator {
  const Motif& h;
  const Matrix& k;
  std::span<const double> weight;
  const std::vector<std::vector<double>>& f;
  std::size_t pinned = kNone;
  std::size_t pinned_value = 0;
  std::vector<std::vector<std::size_t>> before;
  std::vector<std::size_t> u;
  double total = 0.0;

  Enumerator(const Motif& h_, const Matrix& k_, std::span<const double> w_, const std::vector<std::vector<double>>& f_)
      : h(h_), k(k_), weight(w_), f(f_), before(h_.vertices()), u(h_.vertices()) {
    for (auto [a, b] : h.edges()) {
      if (a > b) std::swap(a, b);
      before[b].push_back(a);
    }
  }

  void run(std::size_t level, double partial) {
    if (level == u.size()) {
      total += partial;
      return;
    }
    const std::size_t m = k.rows();
    const std::size_t lo = level == pinned ? pinned_value : 0;
    const std::size_t hi = level == pinned ? pinned_value + 1 : m;
    for (std::size_t x = lo; x < hi; ++x) {
      double p = partial;
      if (level != pinned) p *= weight[x] * f[level][x];
      for (std::size_t b : before[level]) p *= k(u[b], x);
      if (p == 0.0) continue;
      u[level] = x;
      run(level + 1, p);
    }
  }
};

// Leaf elimination on one component rooted at `root`. Fills messages for every vertex in
// the component and returns the product of child messages at the root, as a function of u.
std::vector<double> root_product(const Motif& h, const Matrix& k, std::span<const double> weight,
                                 const std::vector<std::vector<double>>& f, std::size_t root,
                                 std::vector<char>& visited) {
  const std::size_t m = k.rows();
  std::vector<std::size_t> order, parent(h.vertices(), kNone);
  std::vector<std::size_t> stack{root};
  visited[root] = 1;
  while (!stack.empty()) {
    const std::size_t a = stack.back();
    stack.pop_back();
    order.push_back(a);
    for (std::size_t b : h.neighbors(a))
      if (!visited[b]) {
        visited[b] = 1;
        parent[b] = a;
        stack.push_back(b);
      }
  }
  // prod[a](u) = product of messages from a's children, evaluated at u.
  std::vector<std::vector<double>> prod(h.vertices());
  for (std::size_t a : order) prod[a].assign(m, 1.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t c = *it;
    if (c == root) break;
    std::vector<double> g(m);
    for (std::size_t x = 0; x < m; ++x) g[x] = weight[x] * f[c][x] * prod[c][x];
    auto& target = prod[parent[c]];
    for (std::size_t y = 0; y < m; ++y) {
      const auto row = k.row(y);
      double s = 0.0;
      for (std::size_t x = 0; x < m; ++x) s += row[x] * g[x];
      target[y] *= s;
    }
  }
  return prod[root];
}

std::vector<double> forest_pinned(const Motif& h, const Matrix& k, std::span<const double> weight,
                                  const std::vector<std::vector<double>>& f, std::size_t pinned) {
  const std::size_t m = k.rows();
  std::vector<char> visited(h.vertices(), 0);
  std::vector<double> out = root_product(h, k, weight, f, pinned, visited);
  for (std::size_t r = 0; r < h.vertices(); ++r) {
    if (visited[r]) continue;
    const auto p = root_product(h, k, weight, f, r, visited);
    double s = 0.0;
    for (std::size_t x = 0; x < m; ++x) s += weight[x] * f[r][x] * p[x];
    for (double& o : out) o *= s;
  }
  return out;
}

}  // namespace

double motif_sum_bruteforce(const Motif& h, const Matrix& k, std::span<const double> weight,
                            const std::vector<std::vector<double>>& f) {
  check_inputs(h, k, weight, f);
  Enumerator e(h, k, weight, f);
  e.run(0, 1.0);
  return e.total;
}

std::vector<double> motif_pinned_bruteforce(const Motif& h, const Matrix& k, std::span<const double> weight,
                                            const std::vector<std::vector<double>>& f, std::size_t a) {
  check_inputs(h, k, weight, f);
  if (a >= h.vertices()) throw InvalidArgument("motif_pinned: vertex out of range");
  std::vector<double> out(k.rows());
  Enumerator e(h, k, weight, f);
  e.pinned = a;
  for (std::size_t x = 0; x < k.rows(); ++x) {
    e.pinned_value = x;
    e.total = 0.0;
    e.run(0, 1.0);
    out[x] = e.total;
  }
  return out;
}

double motif_sum(const Motif& h, const Matrix& k, std::span<const double> weight,
                 const std::vector<std::vector<double>>& f) {
  check_inputs(h, k, weight, f);
  if (!h.is_forest()) return motif_sum_bruteforce(h, k, weight, f);
  const auto p = forest_pinned(h, k, weight, f, 0);
  double s = 0.0;
  for (std::size_t x = 0; x < k.rows(); ++x) s += weight[x] * f[0][x] * p[x];
  return s;
}

std::vector<double> motif_pinned(const Motif& h, const Matrix& k, std::span<const double> weight,
                                 const std::vector<std::vector<double>>& f, std::size_t a) {
  check_inputs(h, k, weight, f);
  if (a >= h.vertices()) throw InvalidArgument("motif_pinned: vertex out of range");
  if (!h.is_forest()) return motif_pinned_bruteforce(h, k, weight, f, a);
  return forest_pinned(h, k, weight, f, a);
}

std::vector<double> motif_gradient(const Motif& h, const Matrix& k, std::span<const double> weight,
                                   std::span<const double> f) {
  const std::vector<std::vector<double>> fs(h.vertices(), std::vector<double>(f.begin(), f.end()));
  std::vector<double> grad(k.rows(), 0.0);
  for (std::size_t a = 0; a < h.vertices(); ++a) {
    const auto p = motif_pinned(h, k, weight, fs, a);
    for (std::size_t x = 0; x < grad.size(); ++x) grad[x] += p[x];
  }
  return grad;
}

}  // namespace ldpustat
