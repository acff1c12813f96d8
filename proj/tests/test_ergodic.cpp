#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "zoomax/zoomax.hpp"

using namespace zoomax;

TEST(PeriodicPoints, DoublingPeriodOne) {
  const auto orbits = periodic_points(make_doubling(), 1);
  ASSERT_EQ(orbits.size(), 1u);
  EXPECT_EQ(orbits[0].points, std::vector<double>{0.0});
}

TEST(PeriodicPoints, DoublingPeriodTwo) {
  const auto orbits = periodic_points(make_doubling(), 2);
  ASSERT_EQ(orbits.size(), 2u);
  EXPECT_EQ(orbits[0].period, 1);
  EXPECT_EQ(orbits[1].period, 2);
  EXPECT_NEAR(orbits[1].points[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(orbits[1].points[1], 2.0 / 3.0, 1e-15);
}

TEST(PeriodicPoints, TripleMapPeriodTwoHasEightPoints) {
  std::set<double> pts;
  for (const auto& o : periodic_points(make_expanding_circle(3), 2))
    for (double x : o.points) pts.insert(x);
  ASSERT_EQ(pts.size(), 8u);
  int k = 0;
  for (double x : pts) EXPECT_NEAR(x, k++ / 8.0, 1e-15);
}

TEST(PeriodicPoints, CountsAndClosure) {
  for (int d : {2, 3}) {
    const auto m = make_expanding_circle(d);
    for (int n : {4, 6, 8}) {
      const auto orbits = periodic_points(m, n);
      std::size_t total = 0;
      for (const auto& o : orbits) {
        total += o.points.size();
        EXPECT_EQ(n % o.period, 0);
        for (int i = 0; i < o.period; ++i)
          EXPECT_NEAR(circle_distance(m.forward(o.points[static_cast<std::size_t>(i)]),
                                      o.points[static_cast<std::size_t>((i + 1) % o.period)]),
                      0.0, 1e-12);
      }
      EXPECT_EQ(total, static_cast<std::size_t>(std::pow(d, n)) - 1);
    }
  }
}

TEST(PeriodicPoints, QuadraticFullBranchCount) {
  const auto m = make_quadratic(2.0);
  for (int n : {1, 2, 3, 5}) {
    std::size_t total = 0;
    for (const auto& o : periodic_points(m, n)) {
      total += o.points.size();
      for (int i = 0; i < o.period; ++i)
        EXPECT_NEAR(m.forward(o.points[static_cast<std::size_t>(i)]),
                    o.points[static_cast<std::size_t>((i + 1) % o.period)], 1e-9);
    }
    EXPECT_EQ(total, std::size_t{1} << n) << "n = " << n;
  }
}

TEST(PeriodicPoints, BudgetAndRange) {
  EXPECT_THROW(periodic_points(make_doubling(), 0), InvalidInput);
  EXPECT_THROW(periodic_points(make_doubling(), 25), InvalidInput);
  EXPECT_THROW(periodic_points(make_doubling(), 20, 1000), ResourceError);
}

TEST(ErgodicValue, CosSupIsOneAtFixedPoint) {
  const auto e = estimate_ergodic_value(make_doubling(), cos_potential(), 12, Direction::sup);
  EXPECT_NEAR(e.value, 1.0, 1e-15);
  EXPECT_EQ(e.witness.period, 1);
  EXPECT_EQ(e.witness.points[0], 0.0);
}

TEST(ErgodicValue, CoboundaryAveragesVanish) {
  const auto m = make_doubling();
  const auto phi = cob_sin_potential(m);
  for (auto dir : {Direction::sup, Direction::inf})
    EXPECT_NEAR(estimate_ergodic_value(m, phi, 12, dir).value, 0.0, 1e-9);
}

TEST(ErgodicValue, MixedInfIsZeroAtFixedPoint) {
  const auto e = estimate_ergodic_value(make_doubling(), mixed_potential(), 14, Direction::inf);
  EXPECT_NEAR(e.value, 0.0, 1e-15);
  EXPECT_EQ(e.witness.period, 1);
}

TEST(ErgodicValue, WitnessMatchesValueAndOracle) {
  const auto m = make_doubling();
  const auto phi = one_minus_cos_potential();
  const auto e = estimate_ergodic_value(m, phi, 10, Direction::sup);
  EXPECT_NEAR(oracle::cycle_average(m, phi, e.witness.points[0], e.witness.period), e.value, 1e-12);
}

TEST(ErgodicValue, MonotoneInMaxPeriod) {
  const auto m = make_doubling();
  const auto phi = mixed_potential();
  double prev_sup = -1e300, prev_inf = 1e300;
  for (int n = 1; n <= 10; ++n) {
    const double s = estimate_ergodic_value(m, phi, n, Direction::sup).value;
    const double i = estimate_ergodic_value(m, phi, n, Direction::inf).value;
    EXPECT_GE(s, prev_sup);
    EXPECT_LE(i, prev_inf);
    prev_sup = s;
    prev_inf = i;
  }
}

TEST(Subaction, ConstantPotentialGivesZero) {
  const auto m = make_doubling();
  const auto sub = mane_subaction(m, constant_potential(0.7), 0.7, circle_grid(2, 6), 8);
  for (double v : sub.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(sub.offset, 0.0);
  const auto rep = verify_subcohomology(m, constant_potential(0.7), sub, 0.0);
  EXPECT_TRUE(rep.exact_invariant_ok);
  EXPECT_LE(rep.exact_max_violation, 0.0);
  EXPECT_NEAR(rep.min_defect, 0.7, 1e-15);  // the verifier compares phi itself
}

TEST(Subaction, MatchesPreimageOracle) {
  const auto m = make_expanding_circle(3);
  const auto phi = mixed_potential();
  const auto grid = circle_grid(3, 3);
  const auto sub = mane_subaction(m, phi, 0.0, grid, 6);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_NEAR(sub.raw(i), oracle::lambda_n(m, phi, 0.0, grid[i], 6), 1e-12);
}

TEST(Subaction, QuadraticTreeMatchesOracle) {
  const auto m = make_quadratic(2.0);
  const auto phi = HolderPotential{"x2", [](double x) { return x * x - 1.0; }, 1.0, std::nullopt};
  for (double x : {-1.5, 0.2, 1.3}) {
    std::vector<double> best(7);
    detail::tree_level_minima(m, phi, 0.0, x, 7, best.data());
    const double lam = *std::min_element(best.begin(), best.end());
    EXPECT_NEAR(lam, oracle::lambda_n(m, phi, 0.0, x, 7), 1e-9);
  }
}

TEST(Subaction, NonIncreasingInDepth) {
  const auto m = make_doubling();
  const auto phi = mixed_potential();
  const auto grid = circle_grid(2, 6);
  std::vector<double> prev(grid.size(), 1e300);
  for (int n = 1; n <= 10; ++n) {
    const auto sub = mane_subaction(m, phi, 0.0, grid, n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_LE(sub.raw(i), prev[i] + 1e-12);
      prev[i] = sub.raw(i);
    }
  }
}

TEST(Subaction, CoboundaryConvergesToTelescopedValue) {
  const auto m = make_doubling();
  const auto sub = mane_subaction(m, cob_sin_potential(m), 0.0, circle_grid(2, 10), 14);
  for (std::size_t i = 0; i < sub.grid.size(); i += 37)
    EXPECT_NEAR(sub.raw(i), -1.0 - std::sin(kTwoPi * sub.grid[i]), 1e-3);
  EXPECT_NEAR(sub.raw(0), -1.0, 1e-3);
}

TEST(Subaction, NormalizedToMinimumZero) {
  const auto sub = mane_subaction(make_doubling(), one_minus_cos_potential(), 0.0, circle_grid(2, 7), 9);
  EXPECT_EQ(*std::min_element(sub.values.begin(), sub.values.end()), 0.0);
  for (double v : sub.values) EXPECT_TRUE(std::isfinite(v));
}

TEST(Subaction, SupCenteringFlagsDivergence) {
  const auto m = make_doubling();
  const auto phi = mixed_potential();
  const double c = estimate_ergodic_value(m, phi, 10, Direction::sup).value;
  const auto sub = mane_subaction(m, phi, c, circle_grid(2, 6), 12);
  EXPECT_TRUE(sub.divergent);
  EXPECT_NE(sub.note.find("divergent"), std::string::npos);
}

TEST(Subaction, DefaultCenteringIsClampedInfSide) {
  EXPECT_EQ(default_centering(make_doubling(), mixed_potential()), 0.0);
  EXPECT_NEAR(default_centering(make_doubling(), constant_potential(0.25)), 0.25, 1e-15);
  EXPECT_EQ(default_centering(make_doubling(), constant_potential(-0.25)), 0.0);
}

TEST(Subaction, BudgetEnforced) {
  EXPECT_THROW(mane_subaction(make_doubling(), mixed_potential(), 0.0, circle_grid(2, 2), 30),
               ResourceError);
}

TEST(Verify, SuppliedCoboundaryHasZeroDefect) {
  const auto m = make_doubling();
  const auto grid = circle_grid(2, 12);
  std::vector<double> lam;
  for (double x : grid) lam.push_back(-std::sin(kTwoPi * x));
  const auto sub = supplied_subaction(grid, lam);
  const auto rep = verify_subcohomology(m, cob_sin_potential(m), sub, 1e-12);
  for (double d : rep.defects) EXPECT_LT(std::fabs(d), 1e-12);
}

TEST(Verify, ExactInvariantAcrossMapsAndPotentials) {
  for (int d : {2, 3}) {
    const auto m = make_expanding_circle(d);
    for (const auto& phi : {mixed_potential(), one_minus_cos_potential(), cob_sin_potential(m)}) {
      const auto sub = mane_subaction(m, phi, default_centering(m, phi, 8), circle_grid(d, d == 2 ? 7 : 4), 6);
      const auto rep = verify_subcohomology(m, phi, sub, 1.0);
      EXPECT_TRUE(rep.exact_invariant_ok) << m.name << " " << phi.name << " " << rep.exact_max_violation;
      EXPECT_LE(rep.min_defect, rep.mean_defect);
    }
  }
}

TEST(Verify, RejectsNonClosedGrid) {
  std::vector<double> grid{0.1, 0.3, 0.7};
  const auto sub = supplied_subaction(grid, {0.0, 0.0, 0.0});
  EXPECT_THROW(verify_subcohomology(make_doubling(), mixed_potential(), sub, 1e-2), InvalidInput);
}

TEST(Verify, DetectsBadCandidate) {
  const auto m = make_doubling();
  const auto grid = circle_grid(2, 8);
  std::vector<double> lam;
  for (double x : grid) lam.push_back(std::sin(kTwoPi * x));  // wrong sign
  const auto rep = verify_subcohomology(m, cob_sin_potential(m), supplied_subaction(grid, lam), 1e-3);
  EXPECT_LT(rep.min_defect, -0.5);
  EXPECT_FALSE(rep.ok());
}

TEST(LaxOleinik, ZeroPotentialIsImmediateFixedPoint) {
  const auto sub = lax_oleinik_fixed_point(make_doubling(), constant_potential(0.0), 0.0, circle_grid(2, 6), 1e-12, 10);
  EXPECT_EQ(sub.iterations, 1);
  for (double v : sub.values) EXPECT_EQ(v, 0.0);
}

TEST(LaxOleinik, CoboundaryFixedPoint) {
  const auto m = make_doubling();
  const auto sub = lax_oleinik_fixed_point(m, cob_sin_potential(m), 0.0, circle_grid(2, 10), 1e-5, 10000);
  for (std::size_t i = 0; i < sub.grid.size(); ++i)
    EXPECT_NEAR(sub.values[i], -std::sin(kTwoPi * sub.grid[i]) + 1.0, 5e-3);
}

TEST(LaxOleinik, CoboundaryStallsAtInterpolationDrift) {
  // Preimages fall between grid points; the interpolated operator shifts
  // the whole profile by O(h^2) per sweep, so tiny tolerances are not met.
  const auto m = make_doubling();
  try {
    lax_oleinik_fixed_point(m, cob_sin_potential(m), 0.0, circle_grid(2, 10), 1e-10, 200);
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("last residuals"), std::string::npos);
  }
}

TEST(LaxOleinik, OneMinusCosConverges) {
  const auto sub = lax_oleinik_fixed_point(make_doubling(), one_minus_cos_potential(), 0.0, circle_grid(2, 10), 1e-8, 10000);
  EXPECT_LT(sub.residual, 1e-8);
  EXPECT_EQ(sub.residual_history.size(), static_cast<std::size_t>(sub.iterations));
}

TEST(LaxOleinik, NonConvergenceReported) {
  // Positive centering gap: every sweep lowers lambda by about the gap.
  EXPECT_THROW(lax_oleinik_fixed_point(make_doubling(), constant_potential(1.0), 0.0, circle_grid(2, 6), 1e-8, 20),
               ConvergenceError);
}

TEST(LaxOleinik, MixedPassesVerifier) {
  const auto m = make_doubling();
  const auto sub = lax_oleinik_fixed_point(m, mixed_potential(), 0.0, circle_grid(2, 9), 1e-8, 10000);
  const auto rep = verify_subcohomology(m, mixed_potential(), sub, 1e-6);
  EXPECT_TRUE(rep.ok()) << rep.min_defect;
}

TEST(Seminorm, Examples) {
  std::vector<double> g, v;
  for (int i = 0; i < 64; ++i) g.push_back(i / 128.0);  // [0, 1/2)
  v = g;
  EXPECT_NEAR(holder_seminorm_estimate(g, v, 1.0), 1.0, 1e-12);
  std::vector<double> c(g.size(), 3.0);
  EXPECT_EQ(holder_seminorm_estimate(g, c, 0.5), 0.0);
  EXPECT_NEAR(holder_seminorm_estimate(sin_potential(), 1.0, 1024), kTwoPi, 1e-2);
  EXPECT_THROW(holder_seminorm_estimate(std::vector<double>{0.1}, std::vector<double>{1.0}, 1.0), InvalidInput);
}

TEST(Seminorm, HintBoundsPotentials) {
  Rng rng(9);
  const auto m = make_doubling();
  for (const auto& phi : {cos_potential(), sin_potential(), one_minus_cos_potential(), cob_sin_potential(m)}) {
    ASSERT_TRUE(phi.seminorm_hint.has_value());
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform(), y = rng.uniform();
      EXPECT_LE(std::fabs(phi(x) - phi(y)), *phi.seminorm_hint * circle_distance(x, y) + 1e-9);
    }
  }
}

TEST(Sandwich, ZeroPotential) {
  const auto r = two_sided_sandwich(make_doubling(), constant_potential(0.0), circle_grid(2, 6), 8, 1e-12);
  for (double v : r.lambda1) EXPECT_EQ(v, 0.0);
  for (double v : r.lambda2) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(r.lower_defect.min_defect, 0.0);
}

TEST(Sandwich, OneMinusCosNamesTwoCycle) {
  try {
    two_sided_sandwich(make_doubling(), one_minus_cos_potential(), circle_grid(2, 6), 8, 1e-3);
    FAIL();
  } catch (const ZeroAverageViolation& e) {
    EXPECT_EQ(e.witness().period, 2);
    EXPECT_NEAR(e.witness().average, 1.5, 1e-12);
    EXPECT_NEAR(e.witness().points[0], 1.0 / 3.0, 1e-15);
    EXPECT_EQ(std::string(e.what()).find("period 2") != std::string::npos, true);
  }
}

TEST(Sandwich, CoboundaryBothSides) {
  const auto m = make_doubling();
  const auto r = two_sided_sandwich(m, cob_sin_potential(m), circle_grid(2, 8), 10, 5e-3);
  EXPECT_GE(r.lower_defect.min_defect, -5e-3);
  EXPECT_GE(r.upper_defect.min_defect, -5e-3);
  // lambda1 - lambda1 o f <= phi <= lambda2 - lambda2 o f on the grid.
  const auto phi = cob_sin_potential(m);
  const auto fidx = forward_index(m, r.lower_mane.grid);
  for (std::size_t i = 0; i < fidx.size(); ++i) {
    const double p = phi(r.lower_mane.grid[i]);
    EXPECT_LE(r.lambda1[i] - r.lambda1[fidx[i]], p + 5e-3);
    EXPECT_GE(r.lambda2[i] - r.lambda2[fidx[i]], p - 5e-3);
  }
}

TEST(Potentials, TabulatedInterpolation) {
  const auto phi = tabulated_potential("t", {0.0, 1.0, 0.0, -1.0});
  EXPECT_NEAR(phi(0.125), 0.5, 1e-15);
  EXPECT_NEAR(phi(0.875), -0.5, 1e-15);
  EXPECT_NEAR(phi(1.0), 0.0, 1e-15);
  EXPECT_NEAR(*phi.seminorm_hint, 4.0, 1e-15);
}

TEST(Potentials, MixedIsCoboundaryPlusNonnegative) {
  const auto m = make_doubling();
  const auto cob = cob_sin_potential(m);
  const auto omc = one_minus_cos_potential();
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform();
    EXPECT_NEAR(mixed_potential()(x), cob(x) + omc(x), 1e-14);
  }
  EXPECT_LT(mixed_potential()(0.1), 0.0);
}
