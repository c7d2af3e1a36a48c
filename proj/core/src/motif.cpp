#include "ldpustat/motif.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

#include "ldpustat/errors.hpp"

namespace ldpustat {

Motif::Motif(std::size_t vertices, std::vector<Edge> edges) : vertices_(vertices), adjacency_(vertices) {
  if (vertices < 2) throw InvalidArgument("Motif: need at least 2 vertices");
  std::set<Edge> seen;
  for (auto [a, b] : edges) {
    if (a >= vertices || b >= vertices) throw InvalidArgument("Motif: edge endpoint out of range");
    if (a == b) throw InvalidArgument("Motif: self-loops are not allowed");
    const Edge key{std::min(a, b), std::max(a, b)};
    if (!seen.insert(key).second) throw InvalidArgument("Motif: duplicate edge");
    edges_.push_back({a, b});
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (const auto& adj : adjacency_) max_degree_ = std::max(max_degree_, adj.size());
}

Motif Motif::edge() { return Motif(2, {{0, 1}}); }
Motif Motif::triangle() { return Motif(3, {{0, 1}, {1, 2}, {2, 0}}); }

Motif Motif::path(std::size_t vertices) {
  std::vector<Edge> e;
  for (std::size_t a = 0; a + 1 < vertices; ++a) e.push_back({a, a + 1});
  return Motif(vertices, std::move(e));
}

Motif Motif::star(std::size_t leaves) {
  std::vector<Edge> e;
  for (std::size_t a = 1; a <= leaves; ++a) e.push_back({0, a});
  return Motif(leaves + 1, std::move(e));
}

Motif Motif::cycle(std::size_t vertices) {
  if (vertices < 3) throw InvalidArgument("Motif::cycle: need at least 3 vertices");
  std::vector<Edge> e;
  for (std::size_t a = 0; a < vertices; ++a) e.push_back({a, (a + 1) % vertices});
  return Motif(vertices, std::move(e));
}

Motif Motif::complete(std::size_t vertices) {
  std::vector<Edge> e;
  for (std::size_t a = 0; a < vertices; ++a)
    for (std::size_t b = a + 1; b < vertices; ++b) e.push_back({a, b});
  return Motif(vertices, std::move(e));
}

namespace {

std::size_t parse_count(std::string_view s, std::size_t line) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError("expected a non-negative integer, got '" + std::string(s) + "'", line);
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Motif Motif::parse(std::string_view text) {
  std::size_t v = 0;
  bool have_v = false;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (!have_v) {
      if (line.substr(0, 2) != "v=") throw ParseError("motif must start with 'v=<count>'", line_no);
      v = parse_count(trim(line.substr(2)), line_no);
      have_v = true;
      continue;
    }
    const auto sep = line.find_first_of(" \t,");
    if (sep == std::string_view::npos) throw ParseError("expected an edge 'a b'", line_no);
    const std::size_t a = parse_count(trim(line.substr(0, sep)), line_no);
    const std::size_t b = parse_count(trim(line.substr(sep + 1)), line_no);
    if (a == 0 || b == 0 || a > v || b > v) throw ParseError("edge endpoint outside 1..v", line_no);
    edges.push_back({a - 1, b - 1});
  }
  if (!have_v) throw ParseError("empty motif description", 0);
  return Motif(v, std::move(edges));
}

Motif Motif::builtin(std::string_view name) {
  if (name == "K2" || name == "edge") return edge();
  if (name == "K3" || name == "triangle") return triangle();
  if (name.size() >= 2) {
    const auto count = [&] { return parse_count(name.substr(1), 0); };
    switch (name.front()) {
      case 'K': return complete(count());
      case 'P': return path(count());
      case 'S': return star(count());
      case 'C': return cycle(count());
      default: break;
    }
  }
  throw InvalidArgument("unknown builtin motif '" + std::string(name) + "'");
}

bool Motif::is_forest() const {
  std::vector<std::size_t> parent(vertices_);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : edges_) {
    const auto ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

bool Motif::is_tree() const { return is_forest() && edges_.size() + 1 == vertices_; }

bool Motif::is_star() const {
  if (!is_tree()) return false;
  return max_degree_ == vertices_ - 1;
}

std::string Motif::to_text() const {
  std::ostringstream os;
  os << "v=" << vertices_ << '\n';
  for (auto [a, b] : edges_) os << a + 1 << ' ' << b + 1 << '\n';
  return os.str();
}

}  // namespace ldpustat
