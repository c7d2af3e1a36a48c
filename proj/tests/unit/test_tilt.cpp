#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldpustat/errors.hpp"
#include "ldpustat/tilt.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ldpustat;

namespace {

double direct_log_mgf(const FiniteBaseMeasure& mu, double theta) {
  double s = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) s += mu.prob(k) * std::exp(theta * mu.atom(k));
  return std::log(s);
}

}  // namespace

TEST_CASE("base measure validation") {
  CHECK_THROWS_AS(FiniteBaseMeasure({}, {}), InvalidArgument);
  CHECK_THROWS_AS(FiniteBaseMeasure({1, 2}, {0.5}), InvalidArgument);
  CHECK_THROWS_AS(FiniteBaseMeasure({1, 2}, {0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(FiniteBaseMeasure({1, 1}, {0.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(FiniteBaseMeasure({1, 2}, {1.0, 0.0}), InvalidArgument);
  CHECK(FiniteBaseMeasure::rademacher().is_symmetric());
  CHECK(FiniteBaseMeasure::builtin("uniform:4").size() == 4);
  CHECK_THROWS_AS(FiniteBaseMeasure::builtin("gaussian"), InvalidArgument);
}

TEST_CASE("Rademacher closed forms") {
  const auto mu = FiniteBaseMeasure::rademacher();
  CHECK(log_mgf(mu, 0.0) == 0.0);
  for (double th : {-2.0, -0.5, 0.5, 2.0}) {
    CHECK(log_mgf(mu, th) == doctest::Approx(std::log(std::cosh(th))).epsilon(1e-14));
    CHECK(mean_map(mu, th) == doctest::Approx(std::tanh(th)).epsilon(1e-14));
    CHECK(variance_map(mu, th) == doctest::Approx(1.0 - std::tanh(th) * std::tanh(th)).epsilon(1e-12));
  }
  CHECK(mean_map(mu, 0.0) == 0.0);
  CHECK(inverse_mean(mu, 0.0) == 0.0);
  CHECK(inverse_mean(mu, 0.5) == doctest::Approx(std::atanh(0.5)).epsilon(1e-10));
  CHECK(inverse_mean(mu, 1.0) == kInfinity);
  CHECK(inverse_mean(mu, -1.0) == -kInfinity);
  CHECK_THROWS_AS(inverse_mean(mu, 1.5), InvalidArgument);
  CHECK(gamma(mu, 0.0) == 0.0);
  CHECK(gamma(mu, 1.0) == doctest::Approx(std::log(2.0)));
  CHECK(gamma(mu, 0.5) == doctest::Approx(oracle::rademacher_gamma(0.5)).epsilon(1e-12));
}

TEST_CASE("log-MGF matches direct sums and is convex") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = gen::measure(rng, 2 + rng.below(5));
    double prev_slope = -kInfinity;
    for (double th = -4.0; th <= 4.0; th += 0.25) {
      CHECK(log_mgf(mu, th) == doctest::Approx(direct_log_mgf(mu, th)).epsilon(1e-12));
      const double second = log_mgf(mu, th + 0.1) - 2 * log_mgf(mu, th) + log_mgf(mu, th - 0.1);
      CHECK(second >= -1e-13);
      const double slope = mean_map(mu, th);
      CHECK(slope > prev_slope);
      prev_slope = slope;
    }
    CHECK(log_mgf(mu, 0.0) == doctest::Approx(0.0));
    CHECK(mean_map(mu, 0.0) == doctest::Approx(mu.mean()).epsilon(1e-13));
  }
}

TEST_CASE("tilt round trips: inverse_mean(mean_map(theta)) = theta") {
  Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mu = gen::measure(rng, 2 + rng.below(5));
    for (int i = 0; i < 10; ++i) {
      const double th = gen::real(rng, -6.0, 6.0);
      CHECK(inverse_mean(mu, mean_map(mu, th)) == doctest::Approx(th).epsilon(1e-10));
      const double m = gen::real(rng, mu.min_atom(), mu.max_atom());
      CHECK(mean_map(mu, inverse_mean(mu, m)) == doctest::Approx(m).epsilon(1e-10));
    }
  }
}

TEST_CASE("gamma is the KL divergence of the tilt and is convex") {
  Rng rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    const auto mu = gen::measure(rng, 2 + rng.below(4));
    CHECK(gamma(mu, mu.mean()) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(gamma(mu, mu.max_atom()) == doctest::Approx(-std::log(mu.prob(mu.argmax()))));
    CHECK(gamma(mu, mu.min_atom()) == doctest::Approx(-std::log(mu.prob(mu.argmin()))));
    const double lo = mu.min_atom(), hi = mu.max_atom();
    const double h = (hi - lo) / 40.0;
    for (int i = 1; i < 39; ++i) {
      const double m = lo + i * h;
      const double th = inverse_mean(mu, m);
      CHECK(gamma(mu, m) == doctest::Approx(kl_divergence(tilted_measure(mu, th), mu)).epsilon(1e-10));
      CHECK(gamma(mu, m) == doctest::Approx(th * m - log_mgf(mu, th)).epsilon(1e-10));
      if (i > 1 && i < 38) CHECK(gamma(mu, m + h) - 2 * gamma(mu, m) + gamma(mu, m - h) >= -1e-12);
    }
  }
}

TEST_CASE("tilted measure") {
  const auto mu = FiniteBaseMeasure::rademacher();
  const auto same = tilted_measure(mu, 0.0);
  CHECK(same.probs() == mu.probs());
  const auto steep = tilted_probs(mu, 30.0);
  CHECK(steep[0] == doctest::Approx(std::exp(-60.0) / (1.0 + std::exp(-60.0))).epsilon(1e-12));
  CHECK(steep[1] == 1.0);
  Rng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto nu = gen::measure(rng, 2 + rng.below(5));
    const double th = gen::real(rng, -3, 3);
    CHECK(tilted_measure(nu, th).mean() == doctest::Approx(mean_map(nu, th)).epsilon(1e-12));
  }
}

TEST_CASE("KL divergence is nonnegative with equality only at equality") {
  const auto mu = FiniteBaseMeasure::rademacher();
  CHECK(kl_divergence(mu, mu) == 0.0);
  CHECK(kl_divergence(std::vector<double>{0.0, 1.0}, mu.probs()) == doctest::Approx(std::log(2.0)));
  CHECK(kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0}) == kInfinity);
  Rng rng(25);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.below(5);
    const auto p = gen::probability(rng, k), q = gen::probability(rng, k);
    CHECK(kl_divergence(p, q) > 0.0);
    CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(kl_divergence(FiniteBaseMeasure::rademacher(), FiniteBaseMeasure::uniform_colors(2)),
                  InvalidArgument);
}
