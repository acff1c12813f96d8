#pragma once
//
// Ergodic optimization on expanding maps: extremal periodic averages, the
// infimum-of-Birkhoff-sums subaction over inverse-branch trees,
//
//   lambda_N(x) = min_{1 <= n <= N} min_{y in f^{-n}(x)} S_n(phi - c)(y),
//
// a Lax-Oleinik fixed-point cross-check, and the sub-cohomology verifier
// for phi >= u - u o f with u = -lambda.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zoomax/core.hpp"
#include "zoomax/potential.hpp"

namespace zoomax {

// ---------------------------------------------------------------------------
// Periodic orbits

struct PeriodicOrbit {
  std::vector<double> points;
  int period = 0;
  double average = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t code = 0;  // k in x = k / (d^n - 1) for circle maps, else itinerary rank
};

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t budget) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > budget / base) throw ResourceError("periodic orbit search exceeds the node budget");
    r *= base;
  }
  if (r > budget) throw ResourceError("periodic orbit search exceeds the node budget");
  return r;
}

__extension__ using u128 = unsigned __int128;

// Cycles of exact period p for x -> d x mod 1, from x = k / (d^p - 1) with
// exact integer arithmetic. Each cycle is listed once, at its smallest k.
inline std::vector<PeriodicOrbit> circle_cycles(int d, int p, std::uint64_t budget) {
  const std::uint64_t dp = checked_pow(static_cast<std::uint64_t>(d), p, budget);
  const std::uint64_t mod = dp - 1;
  std::vector<PeriodicOrbit> out;
  const auto ud = static_cast<u128>(d);
  for (std::uint64_t k = 0; k < mod || (k == 0 && mod == 0); ++k) {
    std::uint64_t cur = k;
    bool canonical = true;
    int period = 0;
    for (int i = 1; i <= p; ++i) {
      cur = static_cast<std::uint64_t>((ud * cur) % mod);
      if (cur == k) {
        period = i;
        break;
      }
      if (cur < k) {
        canonical = false;
        break;
      }
    }
    if (!canonical || period != p) continue;
    PeriodicOrbit o;
    o.period = p;
    o.code = k;
    cur = k;
    for (int i = 0; i < p; ++i) {
      o.points.push_back(static_cast<double>(cur) / static_cast<double>(mod));
      cur = static_cast<std::uint64_t>((ud * cur) % mod);
    }
    out.push_back(std::move(o));
    if (mod == 0) break;
  }
  return out;
}

inline bool primitive_and_minimal(const std::vector<int>& w) {
  const std::size_t p = w.size();
  for (std::size_t s = 1; s < p; ++s) {
    // Compare rotation by s with w.
    for (std::size_t i = 0; i < p; ++i) {
      const int a = w[(i + s) % p];
      if (a < w[i]) return false;
      if (a > w[i]) break;
      if (i + 1 == p) return false;  // equal rotation: not primitive
    }
  }
  return true;
}

// Cycles of exact period p found as fixed points of inverse-branch words.
inline std::vector<PeriodicOrbit> itinerary_cycles(const MapModel<double>& map, int p,
                                                   std::uint64_t budget) {
  const int b = static_cast<int>(map.branches.size());
  if (b == 0) throw CapabilityError(map.name + " declares no inverse branches");
  const std::uint64_t words = checked_pow(static_cast<std::uint64_t>(b), p, budget);
  std::vector<PeriodicOrbit> out;
  std::vector<int> w(static_cast<std::size_t>(p));
  for (std::uint64_t code = 0; code < words; ++code) {
    std::uint64_t c = code;
    for (int i = p - 1; i >= 0; --i) {
      w[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::uint64_t>(b));
      c /= static_cast<std::uint64_t>(b);
    }
    if (!primitive_and_minimal(w)) continue;
    double x = 0.5 * (map.domain.lo + map.domain.hi);
    bool ok = true;
    for (int it = 0; it < 2000 && ok; ++it) {
      double y = x;
      for (int i = p - 1; i >= 0; --i) {
        const auto& br = map.branches[static_cast<std::size_t>(w[static_cast<std::size_t>(i)])];
        if (!br.valid(y)) {
          ok = false;
          break;
        }
        y = br.apply(y);
      }
      if (!ok) break;
      const bool done = std::fabs(y - x) < 1e-15;
      x = y;
      if (done) break;
    }
    if (!ok) continue;
    PeriodicOrbit o;
    o.period = p;
    o.code = code;
    double cur = x;
    for (int i = 0; i < p; ++i) {
      o.points.push_back(cur);
      cur = map.forward(cur);
    }
    if (std::fabs(cur - x) > 1e-9) continue;
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace detail

/// Cycles of exact period p, each listed once, in deterministic order.
inline std::vector<PeriodicOrbit> periodic_cycles(const MapModel<double>& map, int p,
                                                  std::uint64_t budget = node_budget()) {
  if (p < 1 || p > 24) throw InvalidInput("period must lie in [1, 24]");
  if (map.circle_degree > 0) return detail::circle_cycles(map.circle_degree, p, budget);
  return detail::itinerary_cycles(map, p, budget);
}

/// All cycles whose exact period divides n, by increasing period.
inline std::vector<PeriodicOrbit> periodic_points(const MapModel<double>& map, int n,
                                                  std::uint64_t budget = node_budget()) {
  if (n < 1 || n > 24) throw InvalidInput("period must lie in [1, 24]");
  std::vector<PeriodicOrbit> out;
  for (int p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    auto cyc = periodic_cycles(map, p, budget);
    out.insert(out.end(), std::make_move_iterator(cyc.begin()), std::make_move_iterator(cyc.end()));
  }
  return out;
}

inline double orbit_average(const PeriodicOrbit& o, const HolderPotential& phi) {
  double s = 0.0;
  for (double x : o.points) s += phi(x);
  return s / static_cast<double>(o.period);
}

enum class Direction { sup, inf };

struct ErgodicValueEstimate {
  double value = 0.0;
  PeriodicOrbit witness;
  int max_period = 0;
  Direction direction = Direction::sup;
};

/// Extremal Birkhoff average over all periodic orbits of period <= N: a lower
/// bound for the sup side, an upper bound for the inf side.
inline ErgodicValueEstimate estimate_ergodic_value(const MapModel<double>& map,
                                                   const HolderPotential& phi, int max_period,
                                                   Direction dir,
                                                   std::uint64_t budget = node_budget()) {
  if (max_period < 1) throw InvalidInput("max_period must be >= 1");
  ErgodicValueEstimate est;
  est.max_period = max_period;
  est.direction = dir;
  bool have = false;
  for (int p = 1; p <= max_period; ++p) {
    for (auto& o : periodic_cycles(map, p, budget)) {
      o.average = orbit_average(o, phi);
      const bool better = !have || (dir == Direction::sup ? o.average > est.value
                                                          : o.average < est.value);
      if (better) {
        est.value = o.average;
        est.witness = std::move(o);
        have = true;
      }
    }
  }
  return est;
}

// ---------------------------------------------------------------------------
// Subaction grids

enum class Construction { mane_inf, lax_oleinik, supplied };

inline const char* to_string(Construction c) {
  switch (c) {
    case Construction::mane_inf: return "mane_inf";
    case Construction::lax_oleinik: return "lax_oleinik";
    case Construction::supplied: return "supplied";
  }
  return "?";
}

struct SubactionGrid {
  std::vector<double> grid;
  std::vector<double> values;  // normalized: min is 0
  double offset = 0.0;         // raw value = values[i] + offset
  int depth = 0;
  double centering = 0.0;
  Construction construction = Construction::mane_inf;

  std::vector<double> depth_minima;  // min over the grid of lambda_n, n = 1..depth
  bool divergent = false;
  std::string note;

  int iterations = 0;  // Lax-Oleinik only
  double residual = 0.0;
  std::vector<double> residual_history;

  double raw(std::size_t i) const { return values[i] + offset; }

  /// Nearest-grid value; error bounded by the Hoelder modulus at the grid step.
  double value_at(double x) const {
    const double y = wrap01(x);
    auto it = std::lower_bound(grid.begin(), grid.end(), y);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (auto cand : {it, it == grid.begin() ? grid.end() - 1 : it - 1}) {
      const auto idx = static_cast<std::size_t>((cand == grid.end() ? grid.begin() : cand) - grid.begin());
      const double d = circle_distance(grid[idx], y);
      if (d < best_d) {
        best_d = d;
        best = idx;
      }
    }
    return values[best];
  }
};

/// k / d^m for k < d^m: forward closed under x -> d x mod 1.
inline std::vector<double> circle_grid(int degree, int log_size) {
  if (degree < 2 || log_size < 0) throw InvalidInput("grid needs degree >= 2 and size >= 0");
  const double n = std::pow(static_cast<double>(degree), log_size);
  if (n > static_cast<double>(std::uint64_t{1} << 26)) throw ResourceError("grid too large");
  const auto count = static_cast<std::size_t>(n);
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k) g[k] = static_cast<double>(k) / n;
  return g;
}

/// Subtracts the minimum; returns the subtracted value.
inline double normalize_min_zero(std::vector<double>& v) {
  const double m = *std::min_element(v.begin(), v.end());
  for (double& x : v) x -= m;
  return m;
}

namespace detail {

/// best[n-1] = min over y in f^{-n}(x) of S_n(phi - c)(y), n = 1..depth,
/// by depth-first traversal of the branch tree (prefix sums shared).
inline void tree_level_minima(const MapModel<double>& map, const HolderPotential& phi, double c,
                              double x, int depth, double* best) {
  std::fill(best, best + depth, std::numeric_limits<double>::infinity());
  const auto& f = phi.eval;
  if (map.circle_degree > 0) {
    const int d = map.circle_degree;
    const double dd = d;
    auto rec = [&](auto& self, double y, int level, double sum) -> void {
      for (int j = 0; j < d; ++j) {
        const double z = wrap01((y + j) / dd);
        const double s = sum + (f(z) - c);
        if (s < best[level]) best[level] = s;
        if (level + 1 < depth) self(self, z, level + 1, s);
      }
    };
    rec(rec, x, 0, 0.0);
    return;
  }
  auto rec = [&](auto& self, double y, int level, double sum) -> void {
    for_each_preimage(map, y, [&](int, double z) {
      const double s = sum + (f(z) - c);
      if (s < best[level]) best[level] = s;
      if (level + 1 < depth) self(self, z, level + 1, s);
    });
  };
  rec(rec, x, 0, 0.0);
}

inline void check_tree_budget(const MapModel<double>& map, int depth, std::uint64_t budget) {
  const int deg = map.degree > 0 ? map.degree : static_cast<int>(map.branches.size());
  if (deg <= 0) throw CapabilityError(map.name + " declares no inverse branches");
  const double leaves = std::pow(static_cast<double>(deg), depth);
  if (leaves > static_cast<double>(budget))
    throw ResourceError("branch tree of depth " + std::to_string(depth) + " has " +
                        std::to_string(leaves) + " leaves, over the node budget " +
                        std::to_string(budget));
}

struct TreeProfile {
  std::vector<double> lambda;        // raw lambda_N per grid point
  std::vector<double> depth_minima;  // min over grid of lambda_n, n = 1..N
};

inline TreeProfile tree_profile(const MapModel<double>& map, const HolderPotential& phi, double c,
                                std::span<const double> grid, int depth, std::uint64_t budget) {
  if (depth < 1) throw InvalidInput("depth must be >= 1");
  if (grid.empty()) throw InvalidInput("grid must be nonempty");
  check_tree_budget(map, depth, budget);
  TreeProfile prof;
  prof.lambda.resize(grid.size());
  prof.depth_minima.assign(static_cast<std::size_t>(depth), std::numeric_limits<double>::infinity());
  std::vector<double> best(static_cast<std::size_t>(depth));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    tree_level_minima(map, phi, c, grid[i], depth, best.data());
    double run = std::numeric_limits<double>::infinity();
    for (int n = 0; n < depth; ++n) {
      run = std::min(run, best[static_cast<std::size_t>(n)]);
      auto& dm = prof.depth_minima[static_cast<std::size_t>(n)];
      dm = std::min(dm, run);
    }
    prof.lambda[i] = run;
  }
  return prof;
}

inline double sup_abs_centered(const HolderPotential& phi, double c, std::span<const double> grid) {
  double s = 0.0;
  for (double x : grid) s = std::max(s, std::fabs(phi(x) - c));
  return s;
}

}  // namespace detail

/// Divergence is flagged when the grid minimum of lambda_n drops by more
/// than 10 sup|phi - c| in one depth step, or keeps dropping by at least
/// 1% of sup|phi - c| over each of the last four depth steps (linear drift).
inline bool detect_divergence(std::span<const double> depth_minima, double sup_centered) {
  const std::size_t n = depth_minima.size();
  if (n < 2 || sup_centered == 0.0) return false;
  for (std::size_t i = 1; i < n; ++i)
    if (depth_minima[i - 1] - depth_minima[i] > 10.0 * sup_centered) return true;
  if (n < 5) return false;
  for (std::size_t i = n - 4; i < n; ++i)
    if (depth_minima[i - 1] - depth_minima[i] < 0.01 * sup_centered) return false;
  return true;
}

/// Infimum-of-Birkhoff-sums subaction, evaluated exactly over the depth-N
/// branch tree at every grid point and normalized to minimum 0.
inline SubactionGrid mane_subaction(const MapModel<double>& map, const HolderPotential& phi,
                                    double c, std::vector<double> grid, int depth,
                                    std::uint64_t budget = node_budget()) {
  const auto prof = detail::tree_profile(map, phi, c, grid, depth, budget);
  SubactionGrid sub;
  sub.grid = std::move(grid);
  sub.values = prof.lambda;
  sub.offset = normalize_min_zero(sub.values);
  sub.depth = depth;
  sub.centering = c;
  sub.construction = Construction::mane_inf;
  sub.depth_minima = prof.depth_minima;
  sub.divergent = detect_divergence(sub.depth_minima, detail::sup_abs_centered(phi, c, sub.grid));
  if (sub.divergent) sub.note = "divergent - centering too large";
  return sub;
}

/// Default centering: the inf-side periodic estimate, clamped to >= 0.
inline double default_centering(const MapModel<double>& map, const HolderPotential& phi,
                                int max_period = 12) {
  return std::max(0.0, estimate_ergodic_value(map, phi, max_period, Direction::inf).value);
}

// ---------------------------------------------------------------------------
// Lax-Oleinik iteration

/// Periodic linear interpolation over a sorted grid in [0, 1).
class CircleInterpolator {
public:
  explicit CircleInterpolator(std::span<const double> grid) : grid_(grid) {}

  double operator()(std::span<const double> values, double x) const {
    const double y = wrap01(x);
    const std::size_t n = grid_.size();
    auto it = std::upper_bound(grid_.begin(), grid_.end(), y);
    std::size_t i = it == grid_.begin() ? n - 1 : static_cast<std::size_t>(it - grid_.begin()) - 1;
    const std::size_t j = (i + 1) % n;
    double left = grid_[i];
    double span = grid_[j] - left;
    if (span <= 0.0) span += 1.0;
    double t = y - left;
    if (t < 0.0) t += 1.0;
    const double w = span > 0.0 ? t / span : 0.0;
    if (w == 0.0) return values[i];
    return (1.0 - w) * values[i] + w * values[j];
  }

private:
  std::span<const double> grid_;
};

namespace detail {
inline std::vector<double> lax_oleinik_step(const MapModel<double>& map, const HolderPotential& phi,
                                            double c, std::span<const double> grid,
                                            std::span<const double> lambda) {
  const CircleInterpolator interp(grid);
  std::vector<double> next(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for_each_preimage(map, grid[i], [&](int, double y) {
      best = std::min(best, interp(lambda, y) + (phi(y) - c));
    });
    next[i] = best;
  }
  return next;
}
}  // namespace detail

/// Synchronous iteration of (T lambda)(x) = min_{y in f^{-1} x} lambda(y) +
/// (phi - c)(y) from lambda = 0 until the sup-norm change drops below tol.
inline SubactionGrid lax_oleinik_fixed_point(const MapModel<double>& map,
                                             const HolderPotential& phi, double c,
                                             std::vector<double> grid, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  if (grid.size() < 2) throw InvalidInput("grid needs at least 2 points");
  std::vector<double> lambda(grid.size(), 0.0);
  SubactionGrid sub;
  sub.construction = Construction::lax_oleinik;
  sub.centering = c;
  for (int it = 1; it <= max_iter; ++it) {
    auto next = detail::lax_oleinik_step(map, phi, c, grid, lambda);
    double change = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      change = std::max(change, std::fabs(next[i] - lambda[i]));
    lambda = std::move(next);
    sub.residual_history.push_back(change);
    if (change < tol) {
      sub.iterations = it;
      sub.residual = change;
      sub.grid = std::move(grid);
      sub.values = std::move(lambda);
      sub.offset = normalize_min_zero(sub.values);
      return sub;
    }
  }
  std::string hist;
  const auto& h = sub.residual_history;
  for (std::size_t i = h.size() > 5 ? h.size() - 5 : 0; i < h.size(); ++i)
    hist += (hist.empty() ? "" : ", ") + std::to_string(h[i]);
  throw ConvergenceError("Lax-Oleinik iteration did not reach tol " + std::to_string(tol) +
                         " in " + std::to_string(max_iter) + " iterations; last residuals: " + hist);
}

/// Wraps directly supplied values (Mane-side convention: u = -lambda).
inline SubactionGrid supplied_subaction(std::vector<double> grid, std::vector<double> lambda,
                                        double c = 0.0) {
  if (grid.size() != lambda.size() || grid.empty())
    throw InvalidInput("grid and values must be nonempty and of equal size");
  SubactionGrid sub;
  sub.grid = std::move(grid);
  sub.values = std::move(lambda);
  sub.offset = normalize_min_zero(sub.values);
  sub.centering = c;
  sub.construction = Construction::supplied;
  return sub;
}

// ---------------------------------------------------------------------------
// Verification

inline constexpr double kFloatSlack = 1e-12;

struct DefectReport {
  double min_defect = 0.0;
  double argmin = 0.0;
  std::size_t argmin_index = 0;
  double mean_defect = 0.0;
  bool exact_invariant_ok = false;
  double exact_max_violation = 0.0;  // max of lhs - rhs in the exact check
  double tol = 0.0;
  std::vector<double> defects;  // per grid point
  bool ok() const { return exact_invariant_ok && min_defect >= -tol; }
};

/// Index of f(grid[i]) in the grid; throws if the grid is not forward closed.
inline std::vector<std::size_t> forward_index(const MapModel<double>& map,
                                              std::span<const double> grid) {
  std::vector<std::size_t> idx(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = map.forward(grid[i]);
    auto it = std::lower_bound(grid.begin(), grid.end(), y);
    std::size_t best = grid.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (auto cand : {it, it == grid.begin() ? grid.end() - 1 : it - 1}) {
      const auto j = static_cast<std::size_t>((cand == grid.end() ? grid.begin() : cand) - grid.begin());
      const double d = circle_distance(grid[j], y);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best_d > kFloatSlack)
      throw InvalidInput("grid is not closed under the forward map (point " +
                         std::to_string(grid[i]) + ")");
    idx[i] = best;
  }
  return idx;
}

/// (a) Exact truncation invariant lambda_{N+1}(f x) <= lambda_N(x) + (phi - c)(x),
///     with lambda_{N+1} from an independent depth-(N+1) tree evaluation
///     (one-step Lax-Oleinik image for the fixed-point construction).
/// (b) Practical defect phi(x) - u(x) + u(f x) with u = -lambda, >= -tol.
inline DefectReport verify_subcohomology(const MapModel<double>& map, const HolderPotential& phi,
                                         const SubactionGrid& sub, double tol,
                                         std::uint64_t budget = node_budget()) {
  if (sub.grid.empty() || sub.grid.size() != sub.values.size())
    throw InvalidInput("subaction grid is empty or inconsistent");
  const auto fidx = forward_index(map, sub.grid);
  const std::size_t n = sub.grid.size();
  DefectReport rep;
  rep.tol = tol;
  rep.defects.resize(n);

  const double c = sub.centering;
  std::vector<double> next_level;  // lambda at f(x), one level deeper
  switch (sub.construction) {
    case Construction::mane_inf: {
      // Only the forward images of the grid are needed.
      std::vector<std::size_t> targets(fidx);
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      std::vector<double> pts;
      for (auto t : targets) pts.push_back(sub.grid[t]);
      const auto deep = detail::tree_profile(map, phi, c, pts, sub.depth + 1, budget).lambda;
      next_level.assign(n, std::numeric_limits<double>::quiet_NaN());
      for (std::size_t j = 0; j < targets.size(); ++j) next_level[targets[j]] = deep[j];
      break;
    }
    case Construction::lax_oleinik: {
      std::vector<double> raw(n);
      for (std::size_t i = 0; i < n; ++i) raw[i] = sub.raw(i);
      next_level = detail::lax_oleinik_step(map, phi, c, sub.grid, raw);
      break;
    }
    case Construction::supplied:
      next_level.resize(n);
      for (std::size_t i = 0; i < n; ++i) next_level[i] = sub.raw(i);
      break;
  }

  rep.exact_max_violation = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  rep.min_defect = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sub.grid[i];
    const double phix = phi(x);
    const double lhs = next_level[fidx[i]];
    const double rhs = sub.raw(i) + (phix - c);
    rep.exact_max_violation = std::max(rep.exact_max_violation, lhs - rhs);

    const double defect = phix + sub.values[i] - sub.values[fidx[i]];
    rep.defects[i] = defect;
    sum += defect;
    if (defect < rep.min_defect) {
      rep.min_defect = defect;
      rep.argmin = x;
      rep.argmin_index = i;
    }
  }
  rep.mean_defect = sum / static_cast<double>(n);
  rep.exact_invariant_ok = rep.exact_max_violation <= kFloatSlack;
  return rep;
}

/// max over grid pairs of |v(x) - v(y)| / d(x, y)^alpha (circle distance);
/// a sampled lower bound on the true seminorm.
inline double holder_seminorm_estimate(std::span<const double> grid, std::span<const double> values,
                                       double alpha) {
  if (grid.size() < 2 || grid.size() != values.size())
    throw InvalidInput("seminorm estimate needs >= 2 grid points with values");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in (0, 1]");
  double best = 0.0;
  const bool lipschitz = alpha == 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const double d = circle_distance(grid[i], grid[j]);
      if (d == 0.0) continue;
      const double diff = std::fabs(values[i] - values[j]);
      const double q = lipschitz ? diff / d : diff / std::pow(d, alpha);
      best = std::max(best, q);
    }
  }
  return best;
}

/// Seminorm estimate of a potential on the uniform grid of the given size.
inline double holder_seminorm_estimate(const HolderPotential& phi, double alpha,
                                       std::size_t grid_size = 4096) {
  std::vector<double> g(grid_size), v(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    g[k] = static_cast<double>(k) / static_cast<double>(grid_size);
    v[k] = phi(g[k]);
  }
  return holder_seminorm_estimate(g, v, alpha);
}

// ---------------------------------------------------------------------------
// Two-sided sandwich lambda1 - lambda1 o f <= phi <= lambda2 - lambda2 o f.

class ZeroAverageViolation : public HypothesisError {
public:
  ZeroAverageViolation(const PeriodicOrbit& witness)
      : HypothesisError(message(witness)), witness_(witness) {}
  const PeriodicOrbit& witness() const { return witness_; }

private:
  static std::string message(const PeriodicOrbit& o) {
    std::string pts;
    for (double x : o.points) pts += (pts.empty() ? "" : ", ") + std::to_string(x);
    return "periodic orbit of period " + std::to_string(o.period) + " (" + pts +
           ") has average " + std::to_string(o.average) + " != 0";
  }
  PeriodicOrbit witness_;
};

struct SandwichResult {
  SubactionGrid lower_mane;  // construction on phi
  SubactionGrid upper_mane;  // construction on -phi
  DefectReport lower_defect;
  DefectReport upper_defect;
  std::vector<double> lambda1;  // phi >= lambda1 - lambda1 o f, lambda1 = -lambda(phi)
  std::vector<double> lambda2;  // phi <= lambda2 - lambda2 o f, lambda2 = lambda(-phi)
};

inline SandwichResult two_sided_sandwich(const MapModel<double>& map, const HolderPotential& phi,
                                         std::vector<double> grid, int depth, double tol,
                                         int check_period = 12, double zero_tol = 1e-9,
                                         std::uint64_t budget = node_budget()) {
  for (int p = 1; p <= check_period; ++p) {
    for (auto& o : periodic_cycles(map, p, budget)) {
      o.average = orbit_average(o, phi);
      if (std::fabs(o.average) > zero_tol) throw ZeroAverageViolation(o);
    }
  }
  const HolderPotential neg = negated(phi);
  SandwichResult r;
  // Zero periodic averages: both sides are centered at 0.
  r.lower_mane = mane_subaction(map, phi, 0.0, grid, depth, budget);
  r.upper_mane = mane_subaction(map, neg, 0.0, std::move(grid), depth, budget);
  r.lower_defect = verify_subcohomology(map, phi, r.lower_mane, tol, budget);
  r.upper_defect = verify_subcohomology(map, neg, r.upper_mane, tol, budget);
  for (double v : r.lower_mane.values) r.lambda1.push_back(-v);
  r.lambda2 = r.upper_mane.values;
  return r;
}

}  // namespace zoomax
