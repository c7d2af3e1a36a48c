#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ldpustat/errors.hpp"
#include "ldpustat/tilt.hpp"
#include "ldpustat/variational.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ldpustat;

namespace {

VariationalProblem curie_weiss() {
  return {Family::multilinear, Motif::edge(), StepKernel::constant(1.0), FiniteBaseMeasure::rademacher(),
          std::nullopt};
}

VariationalProblem potts(std::size_t c) {
  return {Family::potts, Motif::edge(), StepKernel::constant(1.0), FiniteBaseMeasure::uniform_colors(c),
          std::nullopt};
}

std::vector<double> sorted_means(const VariationalProblem& p, const SolveResult& r) {
  std::vector<double> out;
  for (const auto& o : r.optimizers) out.push_back(profile_means(p, o.profile).front());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("zero tilt gives Z = 0 at the base measure") {
  const auto cw = solve_z(curie_weiss(), 0.0);
  CHECK(cw.value == 0.0);
  REQUIRE(cw.optimizers.size() == 1);
  CHECK(cw.optimizers[0].profile(0, 0) == 0.0);

  const auto p3 = solve_z(potts(3), 0.0);
  CHECK(p3.value == 0.0);
  REQUIRE(p3.optimizers.size() == 1);
  for (std::size_t r = 0; r < 3; ++r) CHECK(p3.optimizers[0].profile(0, r) == doctest::Approx(1.0 / 3.0));

  VariationalProblem gen_problem{Family::generic, Motif::triangle(), StepKernel::constant(1.0),
                                 FiniteBaseMeasure::rademacher(), PhiKernel::product(3, {-1, 1})};
  CHECK(solve_z(gen_problem, 0.0).value == 0.0);
}

TEST_CASE("Curie-Weiss below and above the critical point") {
  const auto sub = solve_z(curie_weiss(), 0.4);
  CHECK(std::abs(sub.value) < 1e-12);
  REQUIRE(sub.optimizers.size() == 1);
  CHECK(std::abs(sub.optimizers[0].profile(0, 0)) < 1e-6);

  for (double theta : {0.75, 1.0, 2.0}) {
    double m = 0.0;
    const double z = oracle::curie_weiss_limit(theta, &m);
    const auto res = solve_z(curie_weiss(), theta);
    CHECK(res.value == doctest::Approx(z).epsilon(1e-10));
    CHECK(res.value >= res.constant_lower_bound - 1e-12);
    const auto ms = sorted_means(curie_weiss(), res);
    REQUIRE(ms.size() == 2);
    CHECK(ms[0] == doctest::Approx(-m).epsilon(1e-8));
    CHECK(ms[1] == doctest::Approx(m).epsilon(1e-8));
    CHECK(ms[1] == doctest::Approx(std::tanh(2 * theta * ms[1])).epsilon(1e-9));
  }
}

TEST_CASE("refining the partition does not change the value") {
  SolveConfig cfg;
  cfg.blocks = 4;
  const auto res = solve_z(curie_weiss(), 1.0, cfg);
  CHECK(res.widths.size() == 4);
  CHECK(res.value == doctest::Approx(oracle::curie_weiss_limit(1.0)).epsilon(1e-10));
}

TEST_CASE("two-color Potts reduces to Curie-Weiss") {
  // f_1 = (1 + m) / 2 turns theta G_2 into theta (1 + m^2) / 2
  for (double theta : {0.6, 2.0, 3.0}) {
    const auto res = solve_z(potts(2), theta);
    CHECK(res.value == doctest::Approx(theta / 2 + oracle::curie_weiss_limit(theta / 2)).epsilon(1e-10));
    double m = 0.0;
    oracle::curie_weiss_limit(theta / 2, &m);
    for (const auto& o : res.optimizers) CHECK(std::abs(o.profile(0, 0) - o.profile(0, 1)) == doctest::Approx(m).epsilon(1e-7));
  }
}

TEST_CASE("three-color Potts at strong coupling concentrates on one color") {
  const auto res = solve_z(potts(3), 50.0);
  CHECK(res.value == doctest::Approx(50.0 - std::log(3.0)).epsilon(1e-12));
  CHECK(res.optimizers.size() == 3);
  for (const auto& o : res.optimizers) CHECK(*std::max_element(o.profile.row(0).begin(), o.profile.row(0).end()) > 1 - 1e-10);
}

TEST_CASE("generic solver specializes to the multilinear and Potts solvers") {
  Rng rng(61);
  for (int trial = 0; trial < 4; ++trial) {
    const auto mu = gen::measure(rng, 3);
    const StepKernel w = gen::kernel(rng, 2, 0.0, 1.5);
    const Motif h = trial % 2 ? Motif::path(3) : Motif::edge();
    const double theta = gen::real(rng, -1.0, 2.0);
    VariationalProblem ml{Family::multilinear, h, w, mu, std::nullopt};
    VariationalProblem gp{Family::generic, h, w, mu, PhiKernel::product(h.vertices(), mu.atoms())};
    CHECK(solve_z(gp, theta).value == doctest::Approx(solve_z(ml, theta).value).epsilon(1e-6));
  }
  for (double theta : {0.5, 1.5, 3.0}) {
    const auto colors = FiniteBaseMeasure::uniform_colors(3);
    VariationalProblem gp{Family::generic, Motif::edge(), StepKernel::constant(1.0), colors, PhiKernel::monochrome(2, 3)};
    CHECK(solve_z(gp, theta).value == doctest::Approx(solve_z(potts(3), theta).value).epsilon(1e-6));
  }
}

TEST_CASE("Z is convex in theta") {
  std::vector<double> zs;
  for (double theta = -1.0; theta <= 2.0; theta += 0.25) zs.push_back(solve_z(curie_weiss(), theta).value);
  for (std::size_t i = 1; i + 1 < zs.size(); ++i) CHECK(zs[i + 1] - 2 * zs[i] + zs[i - 1] >= -1e-10);
}

TEST_CASE("evaluate_profile matches the reported optimizer") {
  const auto res = solve_z(curie_weiss(), 1.0);
  const auto o = evaluate_profile(curie_weiss(), 1.0, res.optimizers[0].profile);
  CHECK(o.value == doctest::Approx(res.value).epsilon(1e-12));
  CHECK(o.penalty == doctest::Approx(oracle::rademacher_gamma(o.profile(0, 0))).epsilon(1e-10));
  CHECK_THROWS_AS(evaluate_profile(curie_weiss(), 1.0, Matrix(2, 1, 0.0)), InvalidArgument);
}

TEST_CASE("solver configuration and problem validation") {
  SolveConfig bad;
  bad.damping = 0.0;
  CHECK_THROWS_AS(solve_z(curie_weiss(), 1.0, bad), InvalidArgument);
  VariationalProblem no_phi{Family::generic, Motif::edge(), StepKernel::constant(1.0), FiniteBaseMeasure::rademacher(),
                            std::nullopt};
  CHECK_THROWS_AS(solve_z(no_phi, 1.0), InvalidArgument);
  CHECK_THROWS_AS(solve_z(curie_weiss(), std::nan("")), InvalidArgument);
  CHECK(parse_family("ising") == Family::multilinear);
  CHECK_THROWS_AS(parse_family("heisenberg"), InvalidArgument);
}

TEST_CASE("starving the solver raises ConvergenceError with the best iterate") {
  SolveConfig cfg;
  cfg.max_iterations = 1;
  cfg.multistart = 2;
  VariationalProblem triangle{Family::multilinear, Motif::triangle(), StepKernel::constant(1.0),
                              FiniteBaseMeasure({-1.0, 0.5, 2.0}, {0.3, 0.3, 0.4}), std::nullopt};
  try {
    solve_z(triangle, 0.7, cfg);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best().profile.rows() == 1);
    CHECK(e.best().residual > cfg.tolerance);
  }
}

TEST_CASE("Legendre rate curve on Curie-Weiss") {
  const auto points = legendre_rate(curie_weiss(), {0.0, 0.75, 1.0, 1.5});
  CHECK(points[0].t == 0.0);
  CHECK(points[0].rate == 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    CHECK_FALSE(points[i].flagged);
    CHECK(points[i].rate == doctest::Approx(oracle::curie_weiss_rate(points[i].t)).epsilon(1e-9));
    const double h = 1e-4, th = points[i].theta;
    const double zp = (solve_z(curie_weiss(), th + h).value - solve_z(curie_weiss(), th - h).value) / (2 * h);
    CHECK(zp == doctest::Approx(points[i].t).epsilon(1e-4));
  }
}

TEST_CASE("constrained rate") {
  const auto typical = constrained_rate(curie_weiss(), 0.0);
  CHECK(typical.rate == 0.0);
  CHECK(typical.witness(0, 0) == 0.0);

  const auto quarter = constrained_rate(curie_weiss(), 0.25);
  CHECK(quarter.rate == doctest::Approx(gamma(FiniteBaseMeasure::rademacher(), 0.5)).epsilon(1e-9));
  CHECK(quarter.multiplier == doctest::Approx(std::atanh(0.5) / 1.0).epsilon(1e-6));
  CHECK(quarter.violation < 1e-10);

  const auto points = legendre_rate(curie_weiss(), {0.6, 0.8, 1.0, 1.25, 2.0});
  for (const auto& p : points)
    CHECK(constrained_rate(curie_weiss(), p.t).rate == doctest::Approx(p.rate).epsilon(1e-8));

  CHECK_THROWS_AS(constrained_rate(curie_weiss(), 1.5), InvalidArgument);
}

TEST_CASE("constrained rate on a non-constant kernel against the tilt oracle") {
  // On W = 2 * 1{both in [0, 1/2)} the edge statistic only sees the first half.
  const StepKernel w({0.0, 0.5, 1.0}, Matrix::from_rows({{2.0, 0.0}, {0.0, 0.0}}));
  VariationalProblem p{Family::multilinear, Motif::edge(), w, FiniteBaseMeasure::rademacher(), std::nullopt};
  // G = 2 * (1/2)^2 m^2 = m^2 / 2 on the first half, penalty = gamma(m) / 2
  const double t = 0.18;
  const double m = std::sqrt(2 * t);
  CHECK(constrained_rate(p, t).rate == doctest::Approx(0.5 * oracle::rademacher_gamma(m)).epsilon(1e-8));
}
