#include <doctest.h>

#include <vector>

#include "ldpustat/errors.hpp"
#include "ldpustat/matrix.hpp"
#include "ldpustat/motif.hpp"
#include "ldpustat/parallel.hpp"
#include "ldpustat/random.hpp"

using namespace ldpustat;

TEST_CASE("symmetric matrix validation") {
  CHECK_THROWS_AS(SymmetricMatrix::from_rows({{0, 1}, {2, 0}}), InvalidArgument);
  CHECK_THROWS_AS(SymmetricMatrix::from_rows({{0, 1, 2}, {1, 0, 3}}), InvalidArgument);
  CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {3}}), InvalidArgument);

  const auto q = SymmetricMatrix::from_rows({{5, 1}, {1, 7}});
  CHECK(q.coupling(0, 0) == 0.0);
  CHECK(q.coupling(0, 1) == 1.0);
  CHECK_FALSE(q.has_zero_diagonal());
  CHECK(q.with_zero_diagonal().has_zero_diagonal());
}

TEST_CASE("permuted relabels sites") {
  const auto q = SymmetricMatrix::from_rows({{0, 1, 2}, {1, 0, 3}, {2, 3, 0}});
  const std::vector<std::size_t> perm{2, 0, 1};
  const auto p = q.permuted(perm);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(p(i, j) == q(perm[i], perm[j]));
}

TEST_CASE("motif construction and shape predicates") {
  CHECK_THROWS_AS(Motif(1, {}), InvalidArgument);
  CHECK_THROWS_AS(Motif(3, {{0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(Motif(3, {{0, 1}, {1, 0}}), InvalidArgument);
  CHECK_THROWS_AS(Motif(3, {{0, 3}}), InvalidArgument);

  CHECK(Motif::edge().is_edge());
  CHECK(Motif::edge().is_star());
  CHECK(Motif::star(3).is_star());
  CHECK(Motif::star(3).max_degree() == 3);
  CHECK(Motif::path(4).is_tree());
  CHECK_FALSE(Motif::path(4).is_star());
  CHECK_FALSE(Motif::triangle().is_forest());
  CHECK(Motif::cycle(4).edge_count() == 4);
  CHECK(Motif::complete(4).edge_count() == 6);
  CHECK(Motif(4, {{0, 1}, {2, 3}}).is_forest());
  CHECK_FALSE(Motif(4, {{0, 1}, {2, 3}}).is_tree());
}

TEST_CASE("motif text round trip and builtins") {
  const Motif m = Motif::parse("# square with a chord\nv=4\n1 2\n2 3\n\n3 4\n4 1\n1 3\n");
  CHECK(m.vertices() == 4);
  CHECK(m.edge_count() == 5);
  CHECK(m.max_degree() == 3);
  const Motif again = Motif::parse(m.to_text());
  CHECK(again.edges() == m.edges());

  CHECK(Motif::builtin("K3").edge_count() == 3);
  CHECK(Motif::builtin("P3").vertices() == 3);
  CHECK(Motif::builtin("S3").vertices() == 4);
  CHECK(Motif::builtin("C5").edge_count() == 5);
  CHECK_THROWS_AS(Motif::builtin("X9"), InvalidArgument);
}

TEST_CASE("motif parse errors carry line numbers") {
  try {
    Motif::parse("v=3\n1 2\n2 7\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(Motif::parse("1 2\n"), ParseError);
  CHECK_THROWS_AS(Motif::parse(""), ParseError);
}

TEST_CASE("seed derivation is deterministic and spreads") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng r(7);
  for (int i = 0; i < 1000; ++i) CHECK(r.below(5) < 5);
}

TEST_CASE("parallel_for covers every index once and pairwise_sum is exact on integers") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  std::vector<double> v(10001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(pairwise_sum(v.data(), v.size()) == 10000.0 * 10001.0 / 2.0);
  CHECK(pairwise_sum(v.data(), 0) == 0.0);
}
