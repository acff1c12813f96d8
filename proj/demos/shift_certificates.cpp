// Weighted metrics on the one-sided 2-shift: axiom checks, domination and
// cylinder contraction certificates.

#include <cstdio>

#include "zoomax/zoomax.hpp"

using namespace zoomax;

namespace {

void report(const char* label, const WeightedShiftMetric& m, const ContractionSeq& seq) {
  const auto w = validate_weights(m, 32);
  std::printf("%-22s submultiplicative %-3s fekete %-3s summable %-3s", label, w.submultiplicative ? "yes" : "no",
              w.fekete ? "yes" : "no", w.summable ? "yes" : "no");
  if (w.submult_witness) std::printf("  witness (%d,%d)", w.submult_witness->first, w.submult_witness->second);
  std::printf("\n");
  const auto dom = check_domination(m, seq, 64);
  std::printf("%-22s dominated by %s: %s\n", "", seq.describe().c_str(), dom.holds ? "yes" : "no");
}

}  // namespace

int main() {
  const auto seq = ContractionSeq::power(2.0, 1.0);
  report("geometric q=1/2", WeightedShiftMetric::geometric(0.5), seq);
  report("geometric q=1/4", WeightedShiftMetric::geometric(0.25), seq);
  report("power (n+1)^-2", WeightedShiftMetric::power(2.0, 1.0), seq);

  const auto x = SymbolicPoint::parse("0110(01)");
  const auto y = SymbolicPoint::parse("0111(0)");
  const auto m = WeightedShiftMetric::geometric(0.25);
  const auto d = shift_metric(x, y, m);
  std::printf("\nd(%s, %s) = %.12g +- %.1e\n", x.str().c_str(), y.str().c_str(), d.value, d.radius);

  const auto standard = WeightedShiftMetric::geometric(0.5);
  const std::vector<double> radii{1e-2, 1e-4, 1e-6};
  const auto e = local_expansion_bounds(standard, x, radii);
  std::printf("standard metric local expansion at x: D- = %.12g, D+ = %.12g\n", e.d_minus, e.d_plus);

  Rng rng(kDefaultSeed);
  const auto dom = check_domination(m, seq, 64);
  std::printf("\n%5s %8s %14s\n", "depth", "pairs", "worst lhs/rhs");
  for (int k = 1; k <= 24; k += 3) {
    double worst = 0.0;
    int fails = 0;
    for (int i = 0; i < 500; ++i) {
      const auto [a, b] = random_cylinder_pair(rng, k, 64);
      const auto cert = cylinder_contraction_check(a, b, k, m, seq, dom);
      worst = std::max(worst, cert.worst_ratio);
      fails += cert.pass ? 0 : 1;
    }
    std::printf("%5d %8d %14.6f%s\n", k, 500, worst, fails ? "  FAIL" : "");
  }
}
