// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "core/distribution.hpp"
#include "core/rng.hpp"

using namespace wdro;

namespace {

Point p1(double v) { return Point::plain({v}); }

}  // namespace

TEST_CASE("make_distribution basics") {
  const auto point = DiscreteDistribution::make({p1(0.0)}, {1.0});
  CHECK(point.size() == 1);
  CHECK(point.weight(0) == doctest::Approx(1.0));

  const auto pair = DiscreteDistribution::make({p1(0.0), p1(1.0)}, {0.5, 0.5});
  CHECK(pair.weight(0) == doctest::Approx(0.5));

  CHECK_THROWS_WITH_AS(DiscreteDistribution::make({}, {}), doctest::Contains("EmptyAtoms"), Error);
  CHECK_THROWS_WITH_AS(DiscreteDistribution::make({p1(0.0)}, {-0.1}),
                       doctest::Contains("NegativeWeight"), Error);
  CHECK_THROWS_WITH_AS(DiscreteDistribution::make({p1(0.0), p1(1.0)}, {0.3, 0.8}),
                       doctest::Contains("WeightSumMismatch"), Error);
  CHECK_THROWS_WITH_AS(
      DiscreteDistribution::make({p1(0.0), Point::plain({1.0, 2.0})}, {0.5, 0.5}),
      doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("weights near one are rescaled, far ones rejected") {
  const auto d = DiscreteDistribution::make({p1(0.0), p1(1.0)}, {0.5, 0.5 + 3e-10});
  double sum = 0.0;
  for (double w : d.weights()) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(DiscreteDistribution::make({p1(0.0), p1(1.0)}, {0.5, 0.5 + 3e-9}), Error);
}

TEST_CASE("expectation on point mass and weighted atoms") {
  auto ident = [](const Point& z) { return z.x[0]; };
  CHECK(DiscreteDistribution::point_mass(p1(7.0)).expectation(ident) == doctest::Approx(7.0));
  CHECK(DiscreteDistribution::make({p1(1.0), p1(3.0)}, {0.5, 0.5}).expectation(ident) ==
        doctest::Approx(2.0));
  CHECK(DiscreteDistribution::make({p1(0.0), p1(4.0)}, {0.25, 0.75}).expectation(ident) ==
        doctest::Approx(3.0));
}

TEST_CASE("expectation is linear over mixtures") {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<DiscreteDistribution> parts;
    std::vector<double> w;
    const int k = 2 + static_cast<int>(rng.uniform() * 3);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      const int n = 1 + static_cast<int>(rng.uniform() * 3);
      std::vector<Point> atoms;
      std::vector<double> mu(n, 1.0 / n);
      for (int a = 0; a < n; ++a) atoms.push_back(p1(rng.normal()));
      parts.push_back(DiscreteDistribution::make(std::move(atoms), std::move(mu)));
      w.push_back(rng.uniform() + 0.1);
      total += w.back();
    }
    for (double& wi : w) wi /= total;
    const double c0 = rng.normal(), c1 = rng.normal();
    auto f = [&](const Point& z) { return c0 + c1 * z.x[0] + z.x[0] * z.x[0]; };
    const DiscreteDistribution mixed = mix(parts, w);
    double direct = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) direct += w[i] * parts[i].expectation(f);
    CHECK(mixed.expectation(f) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(mixed.expectation([](const Point&) { return 1.0; }) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mix merges exactly equal atoms") {
  const auto a = DiscreteDistribution::point_mass(p1(1.5));
  const auto b = DiscreteDistribution::point_mass(p1(2.5));

  const auto same = mix({a, a}, {0.4, 0.6});
  CHECK(same.size() == 1);
  CHECK(same.weight(0) == doctest::Approx(1.0));

  const auto both = mix({a, b}, {0.5, 0.5});
  CHECK(both.size() == 2);

  const auto ident = mix({a}, {1.0});
  CHECK(ident.size() == 1);
  CHECK(ident.atom(0).x[0] == 1.5);

  CHECK_THROWS_WITH_AS(
      mix({a, DiscreteDistribution::point_mass(Point::plain({1.0, 2.0}))}, {0.5, 0.5}),
      doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("coupling validation") {
  const std::vector<double> mu = {0.3, 0.7};
  const std::vector<double> nu = {0.25, 0.25, 0.5};
  CHECK_NOTHROW(Coupling::independent(mu, nu));

  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> a = {0.05 + 0.9 * rng.uniform(), 0.0};
    a[1] = 1.0 - a[0];
    std::vector<double> b = {0.05 + 0.9 * rng.uniform(), 0.0};
    b[1] = 1.0 - b[0];
    CHECK_NOTHROW(Coupling::independent(a, b));
  }

  // Perturbing one cell beyond 1e-9 must break a marginal.
  auto m = Coupling::independent(mu, nu).matrix();
  m[0] += 1e-6;
  CHECK_THROWS_WITH_AS(Coupling::make(m, mu, nu), doctest::Contains("InvalidCoupling"), Error);

  std::vector<double> neg = Coupling::independent(mu, nu).matrix();
  neg[0] = -neg[0];
  CHECK_THROWS_AS(Coupling::make(neg, mu, nu), Error);
}

TEST_CASE("binary and sampled point invariants") {
  CHECK_THROWS_AS(Point::binary({1.0}, 2), Error);
  CHECK_NOTHROW(Point::binary({1.0}, -1));

  auto quad = trapezoid_weights(5);
  double s = 0.0;
  for (double w : quad) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_NOTHROW(Point::sampled({1.0, 2.0, 3.0, 4.0, 5.0}, quad, 0.5));
  CHECK_THROWS_AS(Point::sampled({1.0, 2.0}, quad, 0.5), Error);
  auto bad = quad;
  bad[0] += 1e-6;
  CHECK_THROWS_AS(Point::sampled({1.0, 2.0, 3.0, 4.0, 5.0}, bad, 0.5), Error);
}
