#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ldpustat {

/// Small simple graph H on vertices {0, ..., v-1}. Vertices are 1-based in text I/O.
class Motif {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  Motif(std::size_t vertices, std::vector<Edge> edges);

  static Motif edge();
  static Motif triangle();
  static Motif path(std::size_t vertices);
  static Motif star(std::size_t leaves);
  static Motif cycle(std::size_t vertices);
  static Motif complete(std::size_t vertices);

  /// Parses "v=3\n1 2\n2 3\n3 1". Blank lines and '#' comments are ignored.
  static Motif parse(std::string_view text);
  /// Builtin names: K2, K3, Kv, P<v>, S<leaves>, C<v>.
  static Motif builtin(std::string_view name);

  std::size_t vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t max_degree() const noexcept { return max_degree_; }
  std::size_t degree(std::size_t a) const { return adjacency_[a].size(); }
  const std::vector<std::size_t>& neighbors(std::size_t a) const { return adjacency_[a]; }

  bool is_forest() const;
  bool is_tree() const;
  /// K_{1,v-1}; K2 counts as a star.
  bool is_star() const;
  bool is_edge() const { return vertices_ == 2 && edges_.size() == 1; }

  std::string to_text() const;

 private:
  std::size_t vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t max_degree_ = 0;
};

}  // namespace ldpustat
