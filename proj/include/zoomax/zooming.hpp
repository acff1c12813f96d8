#pragma once
//
// Hyperbolic times, their empirical frequency, pre-ball contraction and
// bounded-distortion checks, and local expansion estimates D^-/D^+.
//
// n is a (sigma, eps)-hyperbolic time for x when, for every 1 <= k <= n,
//   prod_{j=n-k}^{n-1} ||Df(f^j x)^{-1}|| <= sigma^k   and
//   dist_eps(f^{n-k} x, C) >= sigma^{b k},
// where dist_eps is the distance to C truncated to 1 beyond eps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "zoomax/contractions.hpp"
#include "zoomax/core.hpp"
#include "zoomax/rng.hpp"

namespace zoomax {

struct HyperbolicParams {
  double sigma = 0.5;
  double epsilon = 0.1;
  double beta = 0.0;  // critical order exponent; 0 when C is empty
  double b_exp = 0.0; // 0 selects the default 1/3 min{1, 1/beta}

  static double b_ceiling(double beta) {
    return 0.5 * (beta > 0.0 ? std::min(1.0, 1.0 / beta) : 1.0);
  }
  double recurrence_exponent() const {
    return b_exp > 0.0 ? b_exp : (2.0 / 3.0) * b_ceiling(beta);
  }
  void validate() const {
    if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidInput("sigma must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
    if (beta < 0.0) throw InvalidInput("beta must be >= 0");
    const double b = recurrence_exponent();
    if (!(b > 0.0 && b <= b_ceiling(beta)))
      throw InvalidInput("recurrence exponent b must lie in (0, 1/2 min{1, 1/beta}]");
  }
};

/// dist if dist < delta, else 1.
inline double truncated_distance(double dist, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("truncation radius must be positive");
  return dist < delta ? dist : 1.0;
}

/// Truncated distance from p to a finite critical set; 1 for an empty set.
inline double truncated_distance(double p, std::span<const double> critical_set, double delta) {
  double dist = std::numeric_limits<double>::infinity();
  for (double c : critical_set) dist = std::min(dist, std::fabs(p - c));
  return truncated_distance(dist, delta);
}

struct TimeRecord {
  std::vector<std::size_t> indices;
  std::size_t horizon = 0;
  double frequency = 0.0;
};

/// All n <= horizon that are (sigma, eps)-hyperbolic times for x. Runs in
/// O(horizon) with running minima of log-space prefix sums; the defining
/// double loop over (n, k) is the reference semantics.
template <class P>
TimeRecord detect_hyperbolic_times(const MapModel<P>& map, const P& x,
                                   const HyperbolicParams& params, std::size_t horizon) {
  if (horizon < 1) throw InvalidInput("horizon must be >= 1");
  params.validate();
  const double log_sigma = std::log(params.sigma);
  const double b = params.recurrence_exponent();

  TimeRecord rec;
  rec.horizon = horizon;
  require_in_domain(map, x);

  double prefix = 0.0;                                       // P_n
  double min_prefix = std::numeric_limits<double>::infinity();  // min_{m<n} P_m
  double min_recur = std::numeric_limits<double>::infinity();   // min_{m<n} D_m + b m log sigma
  P cur = x;
  for (std::size_t n = 1; n <= horizon; ++n) {
    const std::size_t j = n - 1;
    const double e = map.expansion(cur);
    if (!(e >= kCriticalCutoff))
      throw SingularityError("orbit meets the critical set at step " + std::to_string(j),
                             static_cast<long>(j));
    min_prefix = std::min(min_prefix, prefix);
    const double dist = truncated_distance(map.critical_distance(cur), params.epsilon);
    min_recur = std::min(min_recur, std::log(dist) + b * static_cast<double>(j) * log_sigma);
    prefix += -std::log(e) - log_sigma;
    if (prefix <= min_prefix && min_recur >= b * static_cast<double>(n) * log_sigma)
      rec.indices.push_back(n);
    if (n < horizon) cur = map.forward(cur);
  }
  rec.frequency = static_cast<double>(rec.indices.size()) / static_cast<double>(horizon);
  return rec;
}

struct FrequencyStats {
  std::vector<double> per_point;
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

/// Empirical frequency of hyperbolic times over the horizon, per point and
/// aggregated. Only the measured value is reported; no bound is claimed.
template <class P>
FrequencyStats hyperbolic_frequency(const MapModel<P>& map, std::span<const P> sample,
                                    const HyperbolicParams& params, std::size_t horizon) {
  if (sample.empty()) throw InvalidInput("frequency sample must be nonempty");
  if (horizon < 1) throw InvalidInput("horizon must be >= 1");
  FrequencyStats st;
  st.per_point.reserve(sample.size());
  for (const P& p : sample)
    st.per_point.push_back(detect_hyperbolic_times(map, p, params, horizon).frequency);
  st.min = *std::min_element(st.per_point.begin(), st.per_point.end());
  st.max = *std::max_element(st.per_point.begin(), st.per_point.end());
  st.mean = std::accumulate(st.per_point.begin(), st.per_point.end(), 0.0) /
            static_cast<double>(st.per_point.size());
  return st;
}

// ---------------------------------------------------------------------------
// Pre-balls of one-dimensional maps.

inline constexpr double kBranchAmbiguity = 1e-9;

/// Pulls points near f^n(x) back along the branch itinerary of x's orbit.
class PreballPullback {
public:
  PreballPullback(const MapModel<double>& map, double x, std::size_t n)
      : map_(map), central_(iterate(map, x, n).points) {
    if (n < 1) throw InvalidInput("pre-ball needs n >= 1");
    for (std::size_t j = 0; j < n; ++j) {
      double nearest = std::numeric_limits<double>::infinity();
      double second = std::numeric_limits<double>::infinity();
      for_each_preimage(map_, central_[j + 1], [&](int, double y) {
        const double d = map_.distance(y, central_[j]);
        if (d < nearest) {
          second = nearest;
          nearest = d;
        } else if (d < second) {
          second = d;
        }
      });
      if (second < 2.0 * kBranchAmbiguity)
        throw AmbiguityError("orbit point " + std::to_string(j) +
                             " lies within 1e-9 of a branch boundary");
    }
  }

  std::size_t depth() const { return central_.size() - 1; }
  double center() const { return central_.back(); }
  const std::vector<double>& central_orbit() const { return central_; }

  /// Fills levels[j] = f^j-preimage chain of w at level j; false when w has
  /// no admissible preimage along the itinerary.
  bool pull(double w, std::vector<double>& levels) const {
    const std::size_t n = depth();
    levels.assign(n + 1, 0.0);
    levels[n] = w;
    for (std::size_t j = n; j-- > 0;) {
      double best = std::numeric_limits<double>::quiet_NaN();
      double best_d = std::numeric_limits<double>::infinity();
      for_each_preimage(map_, levels[j + 1], [&](int, double y) {
        const double d = map_.distance(y, central_[j]);
        if (d < best_d) {
          best_d = d;
          best = y;
        }
      });
      if (std::isnan(best)) return false;
      levels[j] = best;
    }
    return true;
  }

  /// Uniform point of the delta-ball around f^n(x), clipped to the domain.
  double sample_ball(Rng& rng, double delta) const {
    const double c = center();
    if (map_.domain.kind == DomainKind::circle) return wrap01(c + delta * (2.0 * rng.uniform() - 1.0));
    const double lo = std::max(map_.domain.lo, c - delta);
    const double hi = std::min(map_.domain.hi, c + delta);
    return rng.uniform(lo, hi);
  }

private:
  const MapModel<double>& map_;
  std::vector<double> central_;
};

struct PreballReport {
  bool pass = true;
  std::size_t pairs = 0;
  std::size_t pullback_failures = 0;
  double worst_ratio = 0.0;  // max over pairs and j of d_j / alpha_{n-j}(d_n)
  std::size_t worst_j = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min alpha - d
  double delta = 0.0;
  std::uint64_t seed = kDefaultSeed;
};

/// Samples pairs in the pre-ball of x at time n and checks
/// d(f^j y, f^j z) <= alpha_{n-j}(d(f^n y, f^n z)) for 0 <= j < n.
inline PreballReport verify_preball_contraction(const MapModel<double>& map, double x,
                                                std::size_t n, const ContractionSeq& seq,
                                                std::size_t pair_sample, double delta = 0.1,
                                                std::uint64_t seed = kDefaultSeed) {
  if (pair_sample < 1) throw InvalidInput("pair sample must be >= 1");
  if (!(delta > 0.0)) throw InvalidInput("ball radius must be positive");
  const PreballPullback pb(map, x, n);
  Rng rng(seed);
  PreballReport rep;
  rep.delta = delta;
  rep.seed = seed;
  std::vector<double> ys, zs;
  for (std::size_t s = 0; s < pair_sample; ++s) {
    const double w1 = pb.sample_ball(rng, delta);
    const double w2 = pb.sample_ball(rng, delta);
    ++rep.pairs;
    if (!pb.pull(w1, ys) || !pb.pull(w2, zs)) {
      ++rep.pullback_failures;
      rep.pass = false;
      continue;
    }
    const double dn = map.distance(ys[n], zs[n]);
    if (dn == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double dj = map.distance(ys[j], zs[j]);
      const double bound = seq(static_cast<int>(n - j), dn);
      const double ratio = dj / bound;
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_j = j;
      }
      rep.worst_margin = std::min(rep.worst_margin, bound - dj);
      if (!leq_rel(dj, bound, 1e-9)) rep.pass = false;
    }
  }
  return rep;
}

struct DistortionReport {
  double rho_hat = 0.0;
  std::size_t samples = 0;
  double worst_y = 0.0;
  double worst_z = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = kDefaultSeed;
};

/// Smallest rho with |log J_n(y) - log J_n(z)| <= rho d(f^n y, f^n z) over
/// sampled pre-ball pairs, J_n = |det Df^n|.
inline DistortionReport check_bounded_distortion(const MapModel<double>& map, double x,
                                                 std::size_t n, std::size_t pair_sample,
                                                 double delta = 0.1,
                                                 std::uint64_t seed = kDefaultSeed) {
  if (pair_sample < 1) throw InvalidInput("pair sample must be >= 1");
  const PreballPullback pb(map, x, n);
  Rng rng(seed);
  DistortionReport rep;
  rep.n = n;
  rep.seed = seed;
  std::vector<double> ys, zs;
  auto log_jac = [&](const std::vector<double>& chain) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double jac = map.jacobian(chain[j]);
      if (!(jac >= kCriticalCutoff))
        throw SingularityError("singular Jacobian in the pre-ball sample", static_cast<long>(j));
      acc += std::log(jac);
    }
    return acc;
  };
  for (std::size_t s = 0; s < pair_sample; ++s) {
    const double w1 = pb.sample_ball(rng, delta);
    const double w2 = pb.sample_ball(rng, delta);
    if (!pb.pull(w1, ys) || !pb.pull(w2, zs)) continue;
    ++rep.samples;
    const double dn = map.distance(ys[n], zs[n]);
    if (dn == 0.0) continue;
    const double rho = std::fabs(log_jac(ys) - log_jac(zs)) / dn;
    if (rho > rep.rho_hat) {
      rep.rho_hat = rho;
      rep.worst_y = ys[0];
      rep.worst_z = zs[0];
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Local expansion D^-(p) = liminf d(fx, fp)/d(x, p), D^+ = limsup.

struct ExpansionBounds {
  double d_minus = 0.0;  // min ratio at the smallest radius
  double d_plus = 0.0;   // max ratio at the smallest radius
  std::vector<double> radii;
  std::vector<double> minus_by_radius;
  std::vector<double> plus_by_radius;
};

/// Generic estimator. `near(p, r, i)` returns the i-th sample point within
/// distance r of p, or std::nullopt when no admissible point exists.
template <class P, class Forward, class Metric, class Near>
ExpansionBounds local_expansion_bounds(const P& p, std::span<const double> radii, Forward&& f,
                                       Metric&& dist, Near&& near,
                                       std::size_t samples_per_radius = 16) {
  if (radii.empty()) throw InvalidInput("need at least one radius");
  if (samples_per_radius < 8) throw InvalidInput("need at least 8 samples per radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw InvalidInput("radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw InvalidInput("radii must be decreasing");
  }
  ExpansionBounds out;
  const P fp = f(p);
  for (double r : radii) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < samples_per_radius; ++i) {
      const auto q = near(p, r, i);
      if (!q) continue;
      const double dx = dist(*q, p);
      if (dx == 0.0) continue;
      const double ratio = dist(f(*q), fp) / dx;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    out.radii.push_back(r);
    out.minus_by_radius.push_back(lo);
    out.plus_by_radius.push_back(hi);
  }
  out.d_minus = out.minus_by_radius.back();
  out.d_plus = out.plus_by_radius.back();
  return out;
}

/// One-dimensional maps: samples p +- r t with t spread over [1/2, 1].
inline ExpansionBounds local_expansion_bounds(const MapModel<double>& map, double p,
                                              std::span<const double> radii,
                                              std::size_t samples_per_radius = 16) {
  require_in_domain(map, p);
  const std::size_t half = samples_per_radius / 2;
  auto near = [&](double c, double r, std::size_t i) -> std::optional<double> {
    const double t = 1.0 - 0.5 * static_cast<double>(i / 2) / static_cast<double>(half);
    const double q = (i % 2 == 0) ? c + r * t : c - r * t;
    if (map.domain.kind == DomainKind::circle) return wrap01(q);
    if (!map.contains(q)) return std::nullopt;
    return q;
  };
  return local_expansion_bounds(p, radii, map.forward, map.distance, near, samples_per_radius);
}

}  // namespace zoomax
