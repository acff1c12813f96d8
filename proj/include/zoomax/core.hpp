#pragma once
//
// Map models and the orbit-level machinery every other module is built on:
// iteration, Birkhoff sums, inverse-branch trees, derivative cocycles and
// covering times.
//
// Points are `double` for one-dimensional systems (circle or interval) and
// `Point2` for circle x interval skew products. All operations are pure
// functions of their inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "zoomax/errors.hpp"

namespace zoomax {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// |f'| below this counts as hitting the critical set.
inline constexpr double kCriticalCutoff = 1e-9;

inline constexpr std::uint64_t kDefaultNodeBudget = std::uint64_t{1} << 24;

/// Node budget for preimage trees. ZOOMAX_BUDGET_NODES may raise it.
inline std::uint64_t node_budget() {
  if (const char* env = std::getenv("ZOOMAX_BUDGET_NODES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > kDefaultNodeBudget) return v;
  }
  return kDefaultNodeBudget;
}

/// Reduce into [0, 1).
inline double wrap01(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

inline double circle_distance(double a, double b) {
  const double d = std::fabs(wrap01(a) - wrap01(b));
  return std::min(d, 1.0 - d);
}

/// Signed representative of a - b in (-1/2, 1/2].
inline double circle_delta(double a, double b) {
  double d = wrap01(a) - wrap01(b);
  if (d > 0.5) d -= 1.0;
  if (d <= -0.5) d += 1.0;
  return d;
}

struct Point2 {
  double theta = 0.0;  // circle coordinate in [0, 1)
  double x = 0.0;      // fibre coordinate
  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class DomainKind { circle, interval, circle_x_interval, symbolic };

struct Domain {
  DomainKind kind = DomainKind::circle;
  // Interval bounds; for circle x interval these bound the fibre.
  double lo = 0.0;
  double hi = 1.0;
};

template <class P>
struct InverseBranch {
  std::function<bool(const P&)> valid;  // where the branch is defined
  std::function<P(const P&)> apply;
};

/// A dynamical system with closed-form inverse branches and derivative data.
///
/// `expansion(x)` is the minimal expansion ||Df(x)^{-1}||^{-1} (|f'(x)| in
/// dimension one); `jacobian(x)` is |det Df(x)|. `critical_distance(x)` is
/// the distance to the critical set, +inf when the set is empty.
template <class P>
struct MapModel {
  std::string name;
  Domain domain;
  std::function<P(const P&)> forward;
  std::vector<InverseBranch<P>> branches;
  std::function<double(const P&)> expansion;
  std::function<double(const P&)> jacobian;
  std::function<double(const P&)> critical_distance;
  std::function<double(const P&, const P&)> distance;
  std::vector<P> critical_points;
  int degree = 0;           // declared topological degree, 0 if not constant
  bool full_branch = false; // every branch valid on the whole domain
  int circle_degree = 0;    // > 0 for x -> d x mod 1 (enables exact fast paths)

  bool contains(const P& p) const;
  bool has_critical_set() const { return !critical_points.empty(); }
};

template <>
inline bool MapModel<double>::contains(const double& p) const {
  if (!std::isfinite(p)) return false;
  switch (domain.kind) {
    case DomainKind::circle:
      return p >= 0.0 && p < 1.0;
    case DomainKind::interval:
      return p >= domain.lo && p <= domain.hi;
    default:
      return false;
  }
}

template <>
inline bool MapModel<Point2>::contains(const Point2& p) const {
  return std::isfinite(p.theta) && std::isfinite(p.x) && p.theta >= 0.0 &&
         p.theta < 1.0 && p.x >= domain.lo && p.x <= domain.hi;
}

template <class P>
struct Orbit {
  std::vector<P> points;
  std::size_t length() const { return points.empty() ? 0 : points.size() - 1; }
  const P& operator[](std::size_t i) const { return points[i]; }
};

inline std::string describe(double x) { return std::to_string(x); }
inline std::string describe(const Point2& p) {
  return "(" + std::to_string(p.theta) + ", " + std::to_string(p.x) + ")";
}

template <class P>
void require_in_domain(const MapModel<P>& map, const P& x) {
  if (!map.contains(x))
    throw DomainError("point " + describe(x) + " outside the domain of " + map.name);
}

template <class P>
Orbit<P> iterate(const MapModel<P>& map, const P& x, std::size_t n) {
  require_in_domain(map, x);
  Orbit<P> orbit;
  orbit.points.reserve(n + 1);
  orbit.points.push_back(x);
  P cur = x;
  for (std::size_t i = 0; i < n; ++i) {
    cur = map.forward(cur);
    orbit.points.push_back(cur);
  }
  return orbit;
}

/// S_n phi(x) = sum_{i<n} phi(f^i x); zero for n = 0.
template <class P, class Phi>
double birkhoff_sum(const MapModel<P>& map, Phi&& phi, const P& x, std::size_t n) {
  require_in_domain(map, x);
  double sum = 0.0;
  P cur = x;
  for (std::size_t i = 0; i < n; ++i) {
    sum += phi(cur);
    if (i + 1 < n) cur = map.forward(cur);
  }
  return sum;
}

/// Calls `visit(branch_index, y)` for every preimage y of x, in branch order.
template <class P, class Visit>
void for_each_preimage(const MapModel<P>& map, const P& x, Visit&& visit) {
  if constexpr (std::is_same_v<P, double>) {
    if (map.circle_degree > 0) {
      const double d = map.circle_degree;
      for (int j = 0; j < map.circle_degree; ++j) visit(j, wrap01((x + j) / d));
      return;
    }
  }
  for (std::size_t i = 0; i < map.branches.size(); ++i) {
    const auto& br = map.branches[i];
    if (br.valid(x)) visit(static_cast<int>(i), br.apply(x));
  }
}

/// All y with f^n(y) = x, in lexicographic branch-index order.
template <class P>
std::vector<P> preimages(const MapModel<P>& map, const P& x, int n,
                         std::uint64_t budget = node_budget()) {
  if (n < 1) throw InvalidInput("preimage depth must be >= 1");
  if (map.branches.empty() && map.circle_degree == 0)
    throw CapabilityError(map.name + " declares no inverse branches");
  require_in_domain(map, x);
  if (map.degree > 0) {
    const double leaves = std::pow(static_cast<double>(map.degree), n);
    if (leaves > static_cast<double>(budget))
      throw ResourceError("preimage tree of depth " + std::to_string(n) +
                          " exceeds the node budget of " + std::to_string(budget));
  }
  std::vector<P> level{x};
  for (int depth = 0; depth < n; ++depth) {
    std::vector<P> next;
    next.reserve(level.size() * static_cast<std::size_t>(std::max(map.degree, 1)));
    for (const P& y : level) {
      for_each_preimage(map, y, [&](int, const P& z) { next.push_back(z); });
      if (next.size() > budget)
        throw ResourceError("preimage enumeration exceeded the node budget");
    }
    level = std::move(next);
  }
  // Breadth-first expansion keeps each parent's children contiguous, which is
  // exactly lexicographic order on branch words read from the root.
  return level;
}

/// log of prod_{j<n} ||Df(f^j x)^{-1}||, accumulated in log space.
template <class P>
double log_derivative_product(const MapModel<P>& map, const P& x, std::size_t n) {
  require_in_domain(map, x);
  double acc = 0.0;
  P cur = x;
  for (std::size_t j = 0; j < n; ++j) {
    const double e = map.expansion(cur);
    if (!(e >= kCriticalCutoff))
      throw SingularityError("orbit of " + describe(x) + " meets the critical set at step " +
                                 std::to_string(j),
                             static_cast<long>(j));
    acc -= std::log(e);
    if (j + 1 < n) cur = map.forward(cur);
  }
  return acc;
}

/// prod_{j<n} ||Df(f^j x)^{-1}|| (1/|f'| in dimension one).
template <class P>
double derivative_product(const MapModel<P>& map, const P& x, std::size_t n) {
  if (n < 1) throw InvalidInput("derivative_product needs n >= 1");
  return std::exp(log_derivative_product(map, x, n));
}

struct CoverResult {
  int steps = -1;        // smallest k with f^k(region) covering the domain
  bool exceeded = false; // true when no k <= k_max was found
  int k_max = 64;
};

/// Smallest k such that the grid-discretized image f^k([lo, hi)) covers the
/// whole one-dimensional domain at `resolution` cells.
inline CoverResult covering_time(const MapModel<double>& map, double lo, double hi,
                                 std::size_t resolution = 1024, int k_max = 64) {
  const bool circle = map.domain.kind == DomainKind::circle;
  if (!circle && map.domain.kind != DomainKind::interval)
    throw CapabilityError("covering_time supports one-dimensional domains only");
  if (!(hi > lo)) throw InvalidInput("covering_time needs a nonempty region");
  if (resolution < 2) throw InvalidInput("covering_time needs resolution >= 2");

  const double d0 = circle ? 0.0 : map.domain.lo;
  const double width = circle ? 1.0 : map.domain.hi - map.domain.lo;
  const double cell = width / static_cast<double>(resolution);
  const auto n = static_cast<long>(resolution);

  std::vector<char> mask(resolution, 0);
  auto mark = [&](double a, double b) {
    // Marks cells meeting [a, b); unwraps across 0 on the circle.
    long first = static_cast<long>(std::floor((a - d0) / cell));
    long last = static_cast<long>(std::ceil((b - d0) / cell)) - 1;
    if (last < first) last = first;
    if (!circle) {
      first = std::clamp(first, 0L, n - 1);
      last = std::clamp(last, 0L, n - 1);
    } else if (last - first >= n) {
      std::fill(mask.begin(), mask.end(), 1);
      return;
    }
    for (long c = first; c <= last; ++c) mask[static_cast<std::size_t>(((c % n) + n) % n)] = 1;
  };
  auto full = [&] { return std::all_of(mask.begin(), mask.end(), [](char c) { return c != 0; }); };

  if (circle && hi - lo >= 1.0) return {0, false, k_max};
  mark(lo, hi);
  if (full()) return {0, false, k_max};

  constexpr int kSub = 8;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<char> next(resolution, 0);
    std::swap(mask, next);  // `next` now holds the current set
    for (std::size_t c = 0; c < resolution; ++c) {
      if (!next[c]) continue;
      const double left = d0 + cell * static_cast<double>(c);
      double prev = map.forward(circle ? wrap01(left) : left);
      for (int s = 1; s <= kSub; ++s) {
        const double t = left + cell * s / kSub;
        const double img = map.forward(circle ? wrap01(t) : std::min(t, map.domain.hi));
        if (circle) {
          // Lift the short arc; the map expands a cell by at most the degree.
          const double delta = circle_delta(img, prev);
          mark(std::min(prev, prev + delta), std::max(prev, prev + delta));
        } else {
          mark(std::min(prev, img), std::max(prev, img));
        }
        prev = img;
      }
    }
    if (full()) return {k, false, k_max};
  }
  return {-1, true, k_max};
}

}  // namespace zoomax
