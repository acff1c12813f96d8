#pragma once
//
// Concrete example systems: expanding circle maps, the quadratic family
// Q_a(x) = a - x^2 with finite-horizon Collet-Eckmann / slow-recurrence /
// expansion-outside-B_delta checkers, and the Viana skew product
// (theta, x) -> (d theta mod 1, a0 + alpha sin(2 pi theta) - x^2).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zoomax/core.hpp"

namespace zoomax {

/// x -> d x mod 1 with branches (x + j)/d, |f'| = d, no critical set.
inline MapModel<double> make_expanding_circle(int d) {
  if (d < 2) throw InvalidInput("expanding circle map needs degree d >= 2");
  MapModel<double> m;
  m.name = d == 2 ? "doubling" : "expanding:d=" + std::to_string(d);
  m.domain = {DomainKind::circle, 0.0, 1.0};
  const double dd = d;
  m.forward = [dd](const double& x) { return wrap01(dd * x); };
  for (int j = 0; j < d; ++j) {
    m.branches.push_back({[](const double&) { return true; },
                          [dd, j](const double& x) { return wrap01((x + j) / dd); }});
  }
  m.expansion = [dd](const double&) { return dd; };
  m.jacobian = m.expansion;
  m.critical_distance = [](const double&) { return std::numeric_limits<double>::infinity(); };
  m.distance = [](const double& a, const double& b) { return circle_distance(a, b); };
  m.degree = d;
  m.full_branch = true;
  m.circle_degree = d;
  return m;
}

inline MapModel<double> make_doubling() { return make_expanding_circle(2); }

struct QuadraticFamily {
  double a = 2.0;

  double operator()(double x) const { return a - x * x; }
  static double derivative(double x) { return -2.0 * x; }
  static constexpr double critical_point = 0.0;
  double critical_value() const { return a; }
  /// [-R, R] with R the repelling fixed point; forward invariant for a <= 2.
  double invariant_radius() const { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * a)); }
};

/// Q_a(x) = a - x^2 on [-R, R]; branches +-sqrt(a - w) where w <= a.
inline MapModel<double> make_quadratic(double a) {
  if (!(a > 0.0 && a <= 2.0))
    throw InvalidInput("quadratic family supported for a in (0, 2]");
  const QuadraticFamily fam{a};
  const double r = fam.invariant_radius();
  MapModel<double> m;
  m.name = "quadratic:a=" + std::to_string(a);
  m.domain = {DomainKind::interval, -r, r};
  m.forward = [a](const double& x) { return a - x * x; };
  const auto ok = [a, r](const double& w) { return w <= a && a - w <= r * r; };
  m.branches.push_back({ok, [a](const double& w) { return -std::sqrt(a - w); }});
  m.branches.push_back({ok, [a](const double& w) { return std::sqrt(a - w); }});
  m.expansion = [](const double& x) { return std::fabs(2.0 * x); };
  m.jacobian = m.expansion;
  m.critical_distance = [](const double& x) { return std::fabs(x); };
  m.distance = [](const double& u, const double& v) { return std::fabs(u - v); };
  m.critical_points = {0.0};
  m.degree = 2;
  m.full_branch = a == 2.0;
  return m;
}

struct VianaParams {
  double a0 = 1.8;
  double alpha = 0.01;
  int d = 16;
  // Morse function b(theta) = sin(2 pi theta); its derivative is used in Df.
  double b(double theta) const { return std::sin(kTwoPi * theta); }
  double b_prime(double theta) const { return kTwoPi * std::cos(kTwoPi * theta); }
  double a_of(double theta) const { return a0 + alpha * b(theta); }
};

/// Half-width r of a strip I = [-r, r] with f(S^1 x I) inside the interior
/// of S^1 x I. The bound map r -> max(a_max, r^2 - a_min) has attracting
/// fixed point a_max and repelling fixed point (1 + sqrt(1 + 4 a_min))/2;
/// every r strictly between them works, and we take the midpoint.
struct VianaStrip {
  double lower_root = 0.0;
  double upper_root = 0.0;
  double half_width = 0.0;
  bool verified = false;  // grid check of strict interior inclusion
};

inline VianaStrip find_viana_strip(const VianaParams& p, int grid = 256) {
  const double a_max = p.a0 + std::fabs(p.alpha);
  const double a_min = p.a0 - std::fabs(p.alpha);
  VianaStrip s;
  double r = a_max;
  for (int i = 0; i < 100; ++i) r = std::max(a_max, r * r - a_min);
  s.lower_root = r;
  s.upper_root = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * a_min));
  if (!(s.upper_root > s.lower_root))
    throw HypothesisError("no forward-invariant strip for these Viana parameters");
  s.half_width = 0.5 * (s.lower_root + s.upper_root);
  const double w = s.half_width;
  bool inside = true;
  for (int i = 0; i < grid && inside; ++i) {
    const double theta = static_cast<double>(i) / grid;
    for (int k = 0; k <= grid; ++k) {
      const double x = -w + 2.0 * w * k / grid;
      const double img = p.a_of(theta) - x * x;
      if (!(img > -w && img < w)) {
        inside = false;
        break;
      }
    }
  }
  s.verified = inside;
  return s;
}

struct VianaStepResult {
  Point2 p;
  bool left_strip = false;
};

/// One step of the skew product; leaving the strip is recorded, not fatal.
inline VianaStepResult viana_step(const Point2& p, const VianaParams& params,
                                  std::optional<double> strip_half_width = std::nullopt) {
  VianaStepResult r;
  r.p.theta = wrap01(params.d * p.theta);
  r.p.x = params.a_of(p.theta) - p.x * p.x;
  if (strip_half_width) r.left_strip = std::fabs(r.p.x) > *strip_half_width;
  return r;
}

/// Smallest singular value of [[d, 0], [alpha b'(theta), -2x]].
inline double viana_min_expansion(const Point2& p, const VianaParams& params) {
  const double a11 = params.d;
  const double a21 = params.alpha * params.b_prime(p.theta);
  const double a22 = -2.0 * p.x;
  const double det = std::fabs(a11 * a22);
  const double t = a11 * a11 + a21 * a21 + a22 * a22;
  const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
  const double smax = std::sqrt(0.5 * (t + disc));
  return smax > 0.0 ? det / smax : 0.0;
}

inline MapModel<Point2> make_viana(const VianaParams& params) {
  if (params.d < 16) throw InvalidInput("Viana map needs base degree d >= 16");
  if (!(params.a0 > 1.0 && params.a0 < 2.0)) throw InvalidInput("Viana map needs a0 in (1, 2)");
  if (!(params.alpha > 0.0)) throw InvalidInput("Viana map needs alpha > 0");
  const VianaStrip strip = find_viana_strip(params);
  const double w = strip.half_width;

  MapModel<Point2> m;
  m.name = "viana:a0=" + std::to_string(params.a0) + ",alpha=" + std::to_string(params.alpha) +
           ",d=" + std::to_string(params.d);
  m.domain = {DomainKind::circle_x_interval, -w, w};
  m.forward = [params](const Point2& p) { return viana_step(p, params).p; };
  const double dd = params.d;
  for (int j = 0; j < params.d; ++j) {
    for (int sign : {-1, 1}) {
      auto theta_of = [dd, j](const Point2& q) { return wrap01((q.theta + j) / dd); };
      m.branches.push_back(
          {[params, theta_of](const Point2& q) { return params.a_of(theta_of(q)) - q.x >= 0.0; },
           [params, theta_of, sign](const Point2& q) {
             const double th = theta_of(q);
             return Point2{th, sign * std::sqrt(params.a_of(th) - q.x)};
           }});
    }
  }
  m.expansion = [params](const Point2& p) { return viana_min_expansion(p, params); };
  m.jacobian = [params](const Point2& p) { return std::fabs(2.0 * params.d * p.x); };
  m.critical_distance = [](const Point2& p) { return std::fabs(p.x); };
  m.distance = [](const Point2& a, const Point2& b) {
    return std::hypot(circle_distance(a.theta, b.theta), a.x - b.x);
  };
  m.critical_points = {Point2{0.0, 0.0}};  // stands for the curve {x = 0}
  m.degree = 2 * params.d;
  return m;
}

// ---------------------------------------------------------------------------
// Finite-horizon condition checkers for the quadratic family.

struct ColletEckmannReport {
  bool pass = true;
  int first_failure = 0;  // step n, 0 when passing
  double min_margin = std::numeric_limits<double>::infinity();  // log|DQ^n| - lambda n
  int argmin_margin = 0;
  std::vector<double> log_derivative;  // log|DQ^n(Q(c))| for n = 1..horizon
};

/// |DQ^n(Q(c))| >= e^{lambda n} for n = 1..horizon, in log space. `slack`
/// absorbs rounding at exact equality.
inline ColletEckmannReport collet_eckmann_check(const QuadraticFamily& fam, double lambda,
                                                int horizon, double slack = 1e-10) {
  if (horizon < 1) throw InvalidInput("collet_eckmann_check needs horizon >= 1");
  ColletEckmannReport r;
  double x = fam.critical_value();
  double acc = 0.0;
  double comp = 0.0;  // Neumaier compensation, keeps long sums near exact
  for (int n = 1; n <= horizon; ++n) {
    const double dq = std::fabs(QuadraticFamily::derivative(x));
    if (dq == 0.0) {
      acc = -std::numeric_limits<double>::infinity();
      comp = 0.0;
    } else if (std::isfinite(acc)) {
      const double term = std::log(dq);
      const double t = acc + term;
      comp += std::fabs(acc) >= std::fabs(term) ? (acc - t) + term : (term - t) + acc;
      acc = t;
    }
    r.log_derivative.push_back(acc + comp);
    const double margin = r.log_derivative.back() - lambda * n;
    if (margin < r.min_margin) {
      r.min_margin = margin;
      r.argmin_margin = n;
    }
    if (margin < -slack && r.pass) {
      r.pass = false;
      r.first_failure = n;
    }
    x = fam(x);
  }
  return r;
}

struct SlowRecurrenceReport {
  bool pass = true;
  bool vacuous = false;  // empty critical set
  int first_failure = 0;
  double min_margin = std::numeric_limits<double>::infinity();  // log dist + sigma k
};

/// dist(f^k x, C) >= e^{-sigma k} for k = 1..horizon.
template <class P>
SlowRecurrenceReport slow_recurrence_check(const MapModel<P>& map, const P& x, double sigma,
                                           int horizon) {
  if (horizon < 1) throw InvalidInput("slow_recurrence_check needs horizon >= 1");
  if (!(sigma > 0.0)) throw InvalidInput("slow_recurrence_check needs sigma > 0");
  SlowRecurrenceReport r;
  if (!map.has_critical_set()) {
    r.vacuous = true;
    return r;
  }
  const Orbit<P> orbit = iterate(map, x, static_cast<std::size_t>(horizon));
  for (int k = 1; k <= horizon; ++k) {
    const double dist = map.critical_distance(orbit[k]);
    const double margin = std::log(dist) + sigma * k;  // log(0) = -inf fails
    r.min_margin = std::min(r.min_margin, margin);
    if (!(dist >= std::exp(-sigma * k)) && r.pass) {
      r.pass = false;
      r.first_failure = k;
    }
  }
  return r;
}

struct ExpansionOutsideReport {
  bool pass = true;
  bool vacuous = false;
  std::size_t segments = 0;         // maximal excursions outside B_delta
  std::size_t checks = 0;           // (segment, n) pairs evaluated
  std::size_t strong_checks = 0;    // pairs under the kappa e^{beta n} clause
  std::size_t skipped_points = 0;   // orbit points inside B_delta
  int first_failure_start = -1;
  int first_failure_n = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::string note;
};

/// Scans maximal orbit excursions x_s, ..., x_{s+L-1} outside
/// B_delta = (-delta, delta) and checks, for n = 1..L,
///   |DQ^n(x_s)| >= kappa delta^{alpha_max - 1} e^{beta n}   (alpha_max = 2),
/// and the stronger |DQ^n(x_s)| >= kappa e^{beta n} when x_s lies in
/// Q(B_delta) = (a - delta^2, a] or the excursion ends by entering B_delta.
inline ExpansionOutsideReport expansion_outside_check(const QuadraticFamily& fam, double x0,
                                                      double delta, double kappa, double beta,
                                                      int horizon, double slack = 1e-10) {
  if (horizon < 1) throw InvalidInput("expansion_outside_check needs horizon >= 1");
  if (!(delta > 0.0) || !(kappa > 0.0)) throw InvalidInput("delta and kappa must be positive");
  constexpr double alpha_max = 2.0;
  ExpansionOutsideReport r;
  r.note = "segments are maximal excursions outside B_delta";
  std::vector<double> orbit{x0};
  for (int i = 0; i < horizon; ++i) orbit.push_back(fam(orbit.back()));
  auto inside = [delta](double x) { return std::fabs(x) < delta; };
  const double log_weak = std::log(kappa) + (alpha_max - 1.0) * std::log(delta);
  const double log_strong = std::log(kappa);

  int s = 0;
  while (s < horizon) {
    if (inside(orbit[s])) {
      ++r.skipped_points;
      ++s;
      continue;
    }
    int e = s;
    while (e < horizon && !inside(orbit[e])) ++e;
    ++r.segments;
    const bool starts_in_image = orbit[s] > fam.a - delta * delta && orbit[s] <= fam.a;
    double acc = 0.0;
    for (int n = 1; n <= e - s; ++n) {
      acc += std::log(std::fabs(QuadraticFamily::derivative(orbit[s + n - 1])));
      const bool strong = starts_in_image || (s + n == e && e <= horizon && inside(orbit[e]));
      const double margin = acc - (strong ? log_strong : log_weak) - beta * n;
      ++r.checks;
      if (strong) ++r.strong_checks;
      r.min_margin = std::min(r.min_margin, margin);
      if (margin < -slack && r.pass) {
        r.pass = false;
        r.first_failure_start = s;
        r.first_failure_n = n;
      }
    }
    s = e;
  }
  if (r.segments == 0) {
    r.vacuous = true;
    r.note = "no orbit segment outside B_delta; vacuous pass";
  }
  return r;
}

}  // namespace zoomax
