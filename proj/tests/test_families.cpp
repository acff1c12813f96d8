#include <gtest/gtest.h>

#include <cmath>

#include "zoomax/zoomax.hpp"

using namespace zoomax;

TEST(ExpandingCircle, Basics) {
  const auto m = make_expanding_circle(2);
  EXPECT_EQ(m.name, "doubling");
  EXPECT_EQ(m.degree, 2);
  EXPECT_FALSE(m.has_critical_set());
  EXPECT_THROW(make_expanding_circle(1), InvalidInput);
  EXPECT_EQ(make_expanding_circle(3).branches.size(), 3u);
}

TEST(Quadratic, MapAndDomain) {
  const auto m = make_quadratic(2.0);
  EXPECT_DOUBLE_EQ(m.forward(1.0), 1.0);
  EXPECT_DOUBLE_EQ(m.domain.hi, 2.0);
  EXPECT_DOUBLE_EQ(m.domain.lo, -2.0);
  EXPECT_TRUE(m.has_critical_set());
  EXPECT_THROW(make_quadratic(2.5), InvalidInput);
  EXPECT_THROW(make_quadratic(0.0), InvalidInput);
}

TEST(Quadratic, CriticalOrbitStaysBounded) {
  for (double a : {1.2, 1.5, 1.8, 2.0}) {
    const QuadraticFamily fam{a};
    double x = fam.critical_value();
    for (int i = 0; i < 5000; ++i) {
      EXPECT_LE(std::fabs(x), a + 1e-12);
      x = fam(x);
    }
  }
}

TEST(ColletEckmann, EqualityAtLnFour) {
  const auto r = collet_eckmann_check(QuadraticFamily{2.0}, std::log(4.0), 50);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(std::fabs(r.min_margin), 1e-10);
  EXPECT_EQ(r.log_derivative.size(), 50u);
}

TEST(ColletEckmann, FailsAtOnePointFive) {
  const auto r = collet_eckmann_check(QuadraticFamily{2.0}, 1.5, 50);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.first_failure, 1);
  EXPECT_LT(4.0, std::exp(1.5));
}

TEST(ColletEckmann, AnyRateAboveLnFourFailsAtOne) {
  for (double eps : {1e-6, 1e-3, 0.1}) {
    const auto r = collet_eckmann_check(QuadraticFamily{2.0}, std::log(4.0) + eps, 10);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.first_failure, 1);
  }
}

TEST(ColletEckmann, NoOverflowAtLongHorizon) {
  const auto r = collet_eckmann_check(QuadraticFamily{2.0}, std::log(4.0), 2000);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.log_derivative.back(), 2000 * std::log(4.0), 1e-8);
}

TEST(ColletEckmann, ZeroHorizonRejected) {
  EXPECT_THROW(collet_eckmann_check(QuadraticFamily{2.0}, 1.0, 0), InvalidInput);
}

TEST(SlowRecurrence, Cases) {
  EXPECT_TRUE(slow_recurrence_check(make_doubling(), 0.3, 0.1, 50).vacuous);
  const auto r = slow_recurrence_check(make_quadratic(2.0), 2.0, 0.01, 50);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.vacuous);
  // x0 = sqrt(2) lands on 0 at step 1.
  const auto f = slow_recurrence_check(make_quadratic(2.0), std::sqrt(2.0), 0.5, 5);
  EXPECT_FALSE(f.pass);
  EXPECT_EQ(f.first_failure, 1);
}

TEST(ExpansionOutside, FixedPointPasses) {
  const auto r = expansion_outside_check(QuadraticFamily{2.0}, -2.0, 0.1, 1.0, std::log(2.0), 50);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.segments, 1u);
  EXPECT_EQ(r.checks, 50u);
}

TEST(ExpansionOutside, PointsInsideBallSkipped) {
  // Orbit of 0: 0 -> 2 -> -2 -> ...; the first point lies in B_delta.
  const auto r = expansion_outside_check(QuadraticFamily{2.0}, 0.0, 0.1, 1.0, std::log(2.0), 20);
  EXPECT_EQ(r.skipped_points, 1u);
  EXPECT_TRUE(r.pass);
}

TEST(ExpansionOutside, VacuousWhenAlwaysInside) {
  // Q_a with small a has an attracting fixed point near 0.
  const auto r = expansion_outside_check(QuadraticFamily{0.001}, 0.0, 0.1, 1.0, 0.1, 10);
  EXPECT_TRUE(r.vacuous);
  EXPECT_TRUE(r.pass);
  EXPECT_NE(r.note.find("vacuous"), std::string::npos);
}

TEST(Viana, StepExamples) {
  const VianaParams p;
  const auto a = viana_step({0.0, 0.0}, p).p;
  EXPECT_DOUBLE_EQ(a.theta, 0.0);
  EXPECT_DOUBLE_EQ(a.x, 1.8);
  const auto b = viana_step({0.25, 1.0}, p).p;
  EXPECT_DOUBLE_EQ(b.theta, 0.0);
  EXPECT_NEAR(b.x, 0.81, 1e-15);
}

TEST(Viana, BaseProjectionIsExpandingCircle) {
  const VianaParams p;
  const auto base = make_expanding_circle(p.d);
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const Point2 q{rng.uniform(), rng.uniform(-1.0, 1.0)};
    EXPECT_EQ(viana_step(q, p).p.theta, base.forward(q.theta));
  }
}

TEST(Viana, StripIsInvariant) {
  const VianaParams p;
  const auto strip = find_viana_strip(p);
  EXPECT_TRUE(strip.verified);
  EXPECT_GT(strip.half_width, p.a0 + p.alpha);
  Rng rng(kDefaultSeed);
  for (int i = 0; i < 100; ++i) {
    Point2 q{rng.uniform(), rng.uniform(-strip.half_width, strip.half_width)};
    for (int s = 0; s < 10000; ++s) {
      const auto r = viana_step(q, p, strip.half_width);
      ASSERT_FALSE(r.left_strip) << "point " << i << " step " << s;
      q = r.p;
    }
  }
}

TEST(Viana, ConstructorValidation) {
  VianaParams p;
  p.d = 8;
  EXPECT_THROW(make_viana(p), InvalidInput);
  p = VianaParams{};
  p.a0 = 2.5;
  EXPECT_THROW(make_viana(p), InvalidInput);
}

TEST(Viana, MinimalExpansionIsSmallestSingularValue) {
  const VianaParams p;
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const Point2 q{rng.uniform(), rng.uniform(-1.5, 1.5)};
    const double s = viana_min_expansion(q, p);
    // The smallest singular value is at most each column norm.
    EXPECT_LE(s, 2.0 * std::fabs(q.x) + 1e-12);
    EXPECT_LE(s, std::hypot(p.d, p.alpha * p.b_prime(q.theta)) + 1e-12);
    double brute = 1e300;
    for (int k = 0; k < 20000; ++k) {
      const double t = kPi * k / 20000.0;
      const double vx = std::cos(t), vy = std::sin(t);
      brute = std::min(brute, std::hypot(p.d * vx, p.alpha * p.b_prime(q.theta) * vx - 2.0 * q.x * vy));
    }
    EXPECT_NEAR(s, brute, 1e-3 * brute + 1e-9);
  }
}

TEST(Viana, BranchesInvertForward) {
  const auto m = make_viana(VianaParams{});
  const Point2 q{0.37, 0.5};
  int count = 0;
  for_each_preimage(m, q, [&](int, const Point2& y) {
    const auto z = m.forward(y);
    EXPECT_NEAR(circle_distance(z.theta, q.theta), 0.0, 1e-12);
    EXPECT_NEAR(z.x, q.x, 1e-12);
    ++count;
  });
  EXPECT_EQ(count, 32);
}
