// Hyperbolic times along orbits of the Chebyshev quadratic x -> 2 - x^2.

#include <cstdio>

#include "zoomax/zoomax.hpp"

using namespace zoomax;

int main() {
  const auto map = make_quadratic(2.0);
  HyperbolicParams p;
  p.sigma = 0.9;
  p.epsilon = 0.1;
  p.beta = 1.0;

  const auto ce = collet_eckmann_check(QuadraticFamily{2.0}, std::log(4.0), 50);
  std::printf("Collet-Eckmann at rate ln 4: %s, min margin %.2e\n", ce.pass ? "pass" : "fail", ce.min_margin);

  Rng rng(kDefaultSeed);
  std::vector<double> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(rng.uniform(-1.9, 1.9));

  std::printf("\n%12s %8s %10s %s\n", "x", "count", "frequency", "first times");
  for (double x : pts) {
    const auto rec = detect_hyperbolic_times(map, x, p, 500);
    std::printf("%12.8f %8zu %10.4f ", x, rec.indices.size(), rec.frequency);
    for (std::size_t i = 0; i < rec.indices.size() && i < 8; ++i) std::printf(" %zu", rec.indices[i]);
    std::printf("\n");
  }

  const double x = pts.front();
  const auto times = detect_hyperbolic_times(map, x, p, 40).indices;
  if (!times.empty()) {
    const std::size_t n = times.back();
    const auto dist = check_bounded_distortion(map, x, n, 1000, 1e-3, kDefaultSeed);
    const auto pre = verify_preball_contraction(map, x, n, ContractionSeq::exponential(-0.5 * std::log(p.sigma)),
                                                500, 1e-4, kDefaultSeed);
    std::printf("\nat n = %zu: distortion estimate %.4f, pre-ball contraction %s (worst ratio %.4f)\n", n,
                dist.rho_hat, pre.pass ? "holds" : "fails", pre.worst_ratio);
  }
}
