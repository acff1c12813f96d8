#include <gtest/gtest.h>

#include <cmath>

#include "zoomax/zoomax.hpp"

using namespace zoomax;

namespace {
SymbolicPoint word(const std::string& s) { return SymbolicPoint::parse(s); }
}  // namespace

TEST(SymbolicPoint, SymbolsAndTails) {
  const auto x = word("101(01)");
  EXPECT_EQ(x.symbol(1), 1);
  EXPECT_EQ(x.symbol(3), 1);
  EXPECT_EQ(x.symbol(4), 0);
  EXPECT_EQ(x.symbol(5), 1);
  EXPECT_EQ(x.symbol(6), 0);
  EXPECT_THROW(x.symbol(0), InvalidInput);
  EXPECT_THROW(word("12"), InvalidInput);
  EXPECT_THROW(SymbolicPoint({}, {0}), InvalidInput);
}

TEST(SymbolicPoint, ShiftAgreesWithSymbols) {
  const auto x = word("1101(011)");
  for (std::size_t k : {0u, 1u, 3u, 4u, 5u, 9u}) {
    const auto y = x.shift(k);
    for (std::size_t n = 1; n <= 20; ++n) EXPECT_EQ(y.symbol(n), x.symbol(n + k)) << k << " " << n;
  }
}

TEST(ShiftMetric, Examples) {
  const auto m = WeightedShiftMetric::geometric(0.5);
  const auto zeros = word("0(0)");
  const auto ones = word("1(1)");
  EXPECT_EQ(shift_metric(zeros, zeros, m).value, 0.0);
  EXPECT_NEAR(shift_metric(zeros, ones, m).value, 1.0, 1e-15);
  for (const auto& mm : {m, WeightedShiftMetric::geometric(0.25, 2.0), WeightedShiftMetric::power(2.0, 1.0)}) {
    EXPECT_NEAR(shift_metric(word("1000"), word("0000"), mm).value, mm.weight(1), 1e-15);
  }
}

TEST(ShiftMetric, GeometricPeriodicTailIsExact) {
  const auto m = WeightedShiftMetric::geometric(0.25);
  // 0101... vs 1010...: every symbol differs, sum 4^-n = 1/3.
  const auto d = shift_metric(word("0(01)"), word("1(10)"), m);
  EXPECT_NEAR(d.value, 1.0 / 3.0, 1e-15);
  EXPECT_LT(d.radius, 1e-14);
}

TEST(ShiftMetric, PowerWeightsCarryTailRadius) {
  const auto m = WeightedShiftMetric::power(2.0, 1.0, 1.0, 64);
  const auto d = shift_metric(word("0(0)"), word("1(1)"), m);
  EXPECT_NEAR(d.value, M_PI * M_PI / 6.0 - 1.0, d.radius + 1e-12);
  EXPECT_GT(d.radius, 0.0);
  EXPECT_THROW(shift_metric(word("0(0)"), word("1(1)"), m, 1e-6), PrecisionError);
  EXPECT_LT(shift_metric(word("10"), word("00"), m, 1e-12).radius, 1e-15);
}

TEST(ShiftMetric, AxiomsOnSamples) {
  Rng rng(13);
  const auto m = WeightedShiftMetric::geometric(0.3);
  auto rnd = [&] {
    std::vector<std::uint8_t> w(32);
    for (auto& s : w) s = static_cast<std::uint8_t>(rng.coin());
    return SymbolicPoint(w);
  };
  for (int i = 0; i < 500; ++i) {
    const auto x = rnd(), y = rnd(), z = rnd();
    const auto dxy = m.distance(x, y), dyx = m.distance(y, x);
    EXPECT_EQ(dxy.value, dyx.value);
    const auto dxz = m.distance(x, z), dzy = m.distance(z, y);
    EXPECT_LE(dxy.value, dxz.value + dzy.value + 2.0 * (dxy.radius + dxz.radius + dzy.radius));
    EXPECT_EQ(m.distance(x, x).value, 0.0);
  }
}

TEST(ShiftMetric, StandardMetricShiftDoubles) {
  Rng rng(19);
  const auto m = WeightedShiftMetric::geometric(0.5);
  for (int i = 0; i < 1000; ++i) {
    auto [x, y] = random_cylinder_pair(rng, 1 + static_cast<int>(rng.below(30)), 64);
    EXPECT_EQ(m.distance(x.shift(1), y.shift(1)).value, 2.0 * m.distance(x, y).value);
  }
}

TEST(Weights, GeometricQuarterValidWithEquality) {
  const auto r = validate_weights(WeightedShiftMetric::geometric(0.25), 32);
  EXPECT_TRUE(r.valid());
  EXPECT_GT(r.equality_cases, 0u);
}

TEST(Weights, PowerLawFailsAtOneOne) {
  const auto r = validate_weights(WeightedShiftMetric::power(2.0, 1.0), 32);
  EXPECT_FALSE(r.submultiplicative);
  ASSERT_TRUE(r.submult_witness.has_value());
  EXPECT_EQ(*r.submult_witness, std::make_pair(1, 1));
  EXPECT_FALSE(r.valid());
}

TEST(Weights, ScaledGeometricValid) {
  const auto r = validate_weights(WeightedShiftMetric::geometric(0.5, 2.0), 32);
  EXPECT_TRUE(r.submultiplicative);
  EXPECT_TRUE(r.fekete);
  EXPECT_TRUE(r.valid());
}

TEST(Weights, InvalidConstruction) {
  EXPECT_THROW(WeightedShiftMetric::geometric(1.0), InvalidInput);
  EXPECT_THROW(WeightedShiftMetric::power(1.0, 1.0), InvalidInput);
  EXPECT_THROW(WeightedShiftMetric::table({0.5, -0.1}, 0.0), InvalidInput);
  EXPECT_THROW(validate_weights(WeightedShiftMetric::geometric(0.5), 1), InvalidInput);
}

TEST(Weights, AgreesWithContractionValidationOnExponentials) {
  for (double q : {0.5, 0.25, 0.1}) {
    const auto w = validate_weights(WeightedShiftMetric::geometric(q), 32);
    const auto c = validate_contraction(ContractionSeq::exponential(-std::log(q)), default_r_grid(), 32);
    EXPECT_TRUE(w.valid());
    EXPECT_TRUE(c.valid);
    EXPECT_GT(w.equality_cases, 0u);
    EXPECT_GT(c.supermultiplicative.equality_cases, 0u);
  }
}

TEST(Domination, QuarterUnderInverseSquare) {
  const auto d = check_domination(WeightedShiftMetric::geometric(0.25), ContractionSeq::power(2.0, 1.0), 64);
  EXPECT_TRUE(d.holds);
  EXPECT_EQ(d.equality_cases, 1u);  // n = 1: 1/4 = 1/4
  EXPECT_TRUE(d.extends_by_induction);
  EXPECT_NE(d.note.find("induction"), std::string::npos);
}

TEST(Domination, FailureNamesWitness) {
  const auto d = check_domination(WeightedShiftMetric::geometric(0.5), ContractionSeq::power(2.0, 1.0), 64);
  EXPECT_FALSE(d.holds);
  EXPECT_EQ(d.witness.value(), 1);
}

TEST(Cylinder, AlternatingTailsRatioIsWeight) {
  const auto m = WeightedShiftMetric::geometric(0.25);
  const auto seq = ContractionSeq::power(2.0, 1.0);
  for (int k : {1, 3, 7, 12}) {
    const std::string pre(static_cast<std::size_t>(k), '0');
    const auto cert = cylinder_contraction_check(word(pre + "(01)"), word(pre + "(10)"), k, m, seq);
    EXPECT_TRUE(cert.pass);
    EXPECT_NEAR(cert.ratio, std::pow(4.0, -k), 1e-15 * std::pow(4.0, -k) * 8);
    EXPECT_LE(cert.ratio, std::pow(k + 1.0, -2.0));
  }
}

TEST(Cylinder, DepthZeroIsVacuous) {
  const auto cert = cylinder_contraction_check(word("0"), word("1"), 0, WeightedShiftMetric::geometric(0.25),
                                               ContractionSeq::power(2.0, 1.0));
  EXPECT_TRUE(cert.pass);
  EXPECT_EQ(cert.ratio, 1.0);
  EXPECT_TRUE(cert.margins.empty());
}

TEST(Cylinder, Errors) {
  const auto m = WeightedShiftMetric::geometric(0.25);
  const auto seq = ContractionSeq::power(2.0, 1.0);
  EXPECT_THROW(cylinder_contraction_check(word("01"), word("00"), 2, m, seq), PreconditionError);
  EXPECT_THROW(cylinder_contraction_check(word("000"), word("001"), 2, WeightedShiftMetric::geometric(0.5), seq),
               HypothesisError);
}

TEST(Cylinder, RandomPairsPass) {
  const auto m = WeightedShiftMetric::geometric(0.25);
  const auto seq = ContractionSeq::power(2.0, 1.0);
  const auto dom = check_domination(m, seq, 64);
  Rng rng(kDefaultSeed);
  for (int i = 0; i < 2000; ++i) {
    const int k = static_cast<int>(rng.below(21));
    const auto [x, y] = random_cylinder_pair(rng, k, 64);
    EXPECT_EQ(common_prefix(x, y, 64), static_cast<std::size_t>(k));
    const auto cert = cylinder_contraction_check(x, y, k, m, seq, dom);
    EXPECT_TRUE(cert.pass);
    EXPECT_LE(cert.worst_ratio, 1.0 + 1e-9);
  }
}

TEST(NonExponential, DiagnosticReportsConflict) {
  const auto d = non_exponential_witness(WeightedShiftMetric::geometric(0.25), ContractionSeq::power(2.0, 1.0), 32);
  EXPECT_FALSE(d.literal_satisfiable);
  EXPECT_TRUE(d.conflicts_with_fekete);
  EXPECT_EQ(d.relaxed_n0, 0);
}

TEST(NonExponential, RelaxedWitnessWithoutSubmultiplicativity) {
  // Power weights dominate a_1^n for a while but are not sub-multiplicative.
  const auto d = non_exponential_witness(WeightedShiftMetric::power(2.0, 1.0), ContractionSeq::power(2.0, 1.0), 32);
  EXPECT_GE(d.relaxed_n0, 2);
}

TEST(LocalExpansion, StandardShiftIsConformalTwo) {
  const auto m = WeightedShiftMetric::geometric(0.5);
  const std::vector<double> radii{1e-2, 1e-4, 1e-6};
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    auto [p, unused] = random_cylinder_pair(rng, 0, 64);
    const auto e = local_expansion_bounds(m, p, radii);
    EXPECT_NEAR(e.d_minus, 2.0, 1e-9);
    EXPECT_NEAR(e.d_plus, 2.0, 1e-9);
  }
}
