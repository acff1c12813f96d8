#pragma once
//
// One-sided full 2-shift with weighted metrics d(x, y) = sum_n b_n |x_n - y_n|.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zoomax/contractions.hpp"
#include "zoomax/errors.hpp"
#include "zoomax/rng.hpp"
#include "zoomax/zooming.hpp"

namespace zoomax {

/// A finite word followed by a periodic tail (default all zeros).
struct SymbolicPoint {
  std::vector<std::uint8_t> word;
  std::vector<std::uint8_t> tail{0};

  SymbolicPoint() : word{0} {}
  SymbolicPoint(std::vector<std::uint8_t> w, std::vector<std::uint8_t> t = {0})
      : word(std::move(w)), tail(std::move(t)) {
    if (word.empty()) throw InvalidInput("symbolic word must have length >= 1");
    if (tail.empty()) throw InvalidInput("symbolic tail must have period >= 1");
    for (auto s : word)
      if (s > 1) throw InvalidInput("symbols must be 0 or 1");
    for (auto s : tail)
      if (s > 1) throw InvalidInput("symbols must be 0 or 1");
  }

  /// Parses "0110" or "0110(01)"; the parenthesized part is the tail.
  static SymbolicPoint parse(const std::string& s) {
    std::vector<std::uint8_t> w, t{0};
    const auto open = s.find('(');
    auto bits = [](std::string_view v) {
      std::vector<std::uint8_t> out;
      for (char ch : v) {
        if (ch != '0' && ch != '1') throw InvalidInput("bad symbol '" + std::string(1, ch) + "'");
        out.push_back(static_cast<std::uint8_t>(ch - '0'));
      }
      return out;
    };
    if (open == std::string::npos) {
      w = bits(s);
    } else {
      if (s.back() != ')') throw InvalidInput("unterminated tail in " + s);
      w = bits(std::string_view(s).substr(0, open));
      t = bits(std::string_view(s).substr(open + 1, s.size() - open - 2));
    }
    return {std::move(w), std::move(t)};
  }

  std::size_t length() const { return word.size(); }

  /// x_n, 1-based.
  int symbol(std::size_t n) const {
    if (n == 0) throw InvalidInput("symbols are indexed from 1");
    if (n <= word.size()) return word[n - 1];
    return tail[(n - word.size() - 1) % tail.size()];
  }

  /// sigma^k(x).
  SymbolicPoint shift(std::size_t k) const {
    const std::size_t len = word.size() > k ? word.size() - k : 1;
    std::vector<std::uint8_t> w(len), t(tail.size());
    for (std::size_t i = 0; i < len; ++i) w[i] = static_cast<std::uint8_t>(symbol(k + i + 1));
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = static_cast<std::uint8_t>(symbol(k + len + j + 1));
    return {std::move(w), std::move(t)};
  }

  std::string str() const {
    std::string s;
    for (auto b : word) s.push_back(static_cast<char>('0' + b));
    s.push_back('(');
    for (auto b : tail) s.push_back(static_cast<char>('0' + b));
    s.push_back(')');
    return s;
  }

  friend bool operator==(const SymbolicPoint&, const SymbolicPoint&) = default;
};

/// Length of the common prefix of x and y, capped at `cap`.
inline std::size_t common_prefix(const SymbolicPoint& x, const SymbolicPoint& y, std::size_t cap) {
  std::size_t n = 0;
  while (n < cap && x.symbol(n + 1) == y.symbol(n + 1)) ++n;
  return n;
}

struct MetricValue {
  double value = 0.0;
  double radius = 0.0;  // |true distance - value| <= radius
};

class WeightedShiftMetric {
public:
  enum class Kind { geometric, power, table };

  /// b_n = c q^n.
  static WeightedShiftMetric geometric(double q, double c = 1.0, int horizon = 64) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidInput("geometric weights need q in (0, 1)");
    if (!(c > 0.0)) throw InvalidInput("weight scale c must be positive");
    WeightedShiftMetric m(Kind::geometric, horizon);
    m.q_ = q;
    m.c_ = c;
    m.fill();
    return m;
  }

  /// b_n = c (n + b)^{-a}; summable only for a > 1.
  static WeightedShiftMetric power(double a, double b, double c = 1.0, int horizon = 64) {
    if (!(a > 1.0)) throw InvalidInput("power weights need a > 1 to be summable");
    if (!(b > -1.0)) throw InvalidInput("power weights need b > -1");
    if (!(c > 0.0)) throw InvalidInput("weight scale c must be positive");
    WeightedShiftMetric m(Kind::power, horizon);
    m.a_ = a;
    m.b_ = b;
    m.c_ = c;
    m.fill();
    return m;
  }

  /// Tabulated b_1..b_H with a certified bound on sum_{n > H} b_n.
  static WeightedShiftMetric table(std::vector<double> weights, double tail_bound) {
    if (weights.empty()) throw InvalidInput("weight table is empty");
    for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("weights must be positive and finite");
    if (!(tail_bound >= 0.0) || !std::isfinite(tail_bound))
      throw InvalidInput("tail bound must be finite and >= 0");
    WeightedShiftMetric m(Kind::table, static_cast<int>(weights.size()));
    m.weights_ = std::move(weights);
    m.table_tail_ = tail_bound;
    return m;
  }

  Kind kind() const { return kind_; }
  int horizon() const { return horizon_; }
  double q() const { return q_; }

  double weight(std::size_t n) const {
    if (n == 0) throw InvalidInput("weights are indexed from 1");
    if (n <= weights_.size()) return weights_[n - 1];
    switch (kind_) {
      case Kind::geometric: return c_ * std::pow(q_, static_cast<double>(n));
      case Kind::power: return c_ * std::pow(static_cast<double>(n) + b_, -a_);
      case Kind::table: break;
    }
    throw PrecisionError("weight index " + std::to_string(n) + " beyond the tabulated horizon");
  }

  /// Certified upper bound on sum_{m > n} b_m.
  double tail_after(std::size_t n) const {
    const double dn = static_cast<double>(n);
    switch (kind_) {
      case Kind::geometric: return c_ * std::pow(q_, dn + 1.0) / (1.0 - q_);
      case Kind::power: return c_ * std::pow(dn + b_, 1.0 - a_) / (a_ - 1.0);
      case Kind::table: {
        if (n > weights_.size()) throw PrecisionError("table metric cannot bound tails beyond its horizon");
        double s = table_tail_;
        for (std::size_t m = n; m < weights_.size(); ++m) s += weights_[m];
        return s;
      }
    }
    return std::numeric_limits<double>::infinity();
  }

  /// sum_n b_n; exact for geometric weights, upper bound otherwise.
  double total() const { return tail_after(0); }

  std::string describe() const {
    switch (kind_) {
      case Kind::geometric: return "geom:q=" + num(q_) + ",c=" + num(c_);
      case Kind::power: return "power:a=" + num(a_) + ",b=" + num(b_) + ",c=" + num(c_);
      case Kind::table: return "table[" + std::to_string(weights_.size()) + "]";
    }
    return "?";
  }

  MetricValue distance(const SymbolicPoint& x, const SymbolicPoint& y) const {
    const std::size_t lead = std::max(x.length(), y.length());
    const std::size_t period = std::lcm(x.tail.size(), y.tail.size());
    if (period > 4096) throw ResourceError("tail periods too long to combine");

    // Beyond `lead` the difference sequence is periodic with period `period`.
    bool tail_differs = false;
    for (std::size_t j = 1; j <= period && !tail_differs; ++j)
      tail_differs = x.symbol(lead + j) != y.symbol(lead + j);

    if (kind_ == Kind::geometric) {
      double s = 0.0;
      for (std::size_t n = 1; n <= lead; ++n)
        if (x.symbol(n) != y.symbol(n)) s += weight(n);
      if (tail_differs) {
        double t = 0.0;
        for (std::size_t j = 1; j <= period; ++j)
          if (x.symbol(lead + j) != y.symbol(lead + j)) t += weight(lead + j);
        s += t / (1.0 - std::pow(q_, static_cast<double>(period)));
      }
      return {s, 8.0 * DBL_EPSILON * s};
    }

    const std::size_t upto = tail_differs ? std::max<std::size_t>(lead, static_cast<std::size_t>(horizon_))
                                          : lead;
    if (kind_ == Kind::table && upto > weights_.size())
      throw PrecisionError("points are longer than the tabulated weight horizon");
    double s = 0.0;
    for (std::size_t n = 1; n <= upto; ++n)
      if (x.symbol(n) != y.symbol(n)) s += weight(n);
    const double t = tail_differs ? tail_after(upto) : 0.0;
    return {s + 0.5 * t, 0.5 * t + 8.0 * DBL_EPSILON * s};
  }

private:
  WeightedShiftMetric(Kind k, int horizon) : kind_(k), horizon_(horizon) {
    if (horizon < 1 || horizon > (1 << 20)) throw InvalidInput("metric horizon out of range");
  }
  void fill() {
    weights_.clear();
    for (int n = 1; n <= horizon_; ++n) weights_.push_back(weight(static_cast<std::size_t>(n)));
  }
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  Kind kind_;
  int horizon_;
  double q_ = 0.0, c_ = 1.0, a_ = 0.0, b_ = 0.0;
  std::vector<double> weights_;
  double table_tail_ = 0.0;
};

/// Midpoint and error radius; throws when the radius exceeds `precision`.
inline MetricValue shift_metric(const SymbolicPoint& x, const SymbolicPoint& y,
                                const WeightedShiftMetric& m,
                                double precision = std::numeric_limits<double>::infinity()) {
  const auto v = m.distance(x, y);
  if (v.radius > precision)
    throw PrecisionError("metric horizon " + std::to_string(m.horizon()) +
                         " leaves error radius " + std::to_string(v.radius) +
                         " above the requested " + std::to_string(precision));
  return v;
}

// ---------------------------------------------------------------------------
// Weight axioms

struct WeightReport {
  bool submultiplicative = true;
  std::optional<std::pair<int, int>> submult_witness;  // (n, k) with b_{n+k} > b_n b_k
  std::size_t equality_cases = 0;
  bool summable = true;
  double sum_bound = 0.0;
  bool fekete = true;  // b_n <= b_1^n
  std::optional<int> fekete_witness;
  bool valid() const { return submultiplicative && summable && fekete; }
  std::string detail;
};

inline WeightReport validate_weights(const WeightedShiftMetric& m, int n_max) {
  if (n_max < 2) throw InvalidInput("n_max must be >= 2");
  WeightReport r;
  for (int s = 2; s <= n_max && r.submultiplicative; ++s) {
    const double bs = m.weight(static_cast<std::size_t>(s));
    for (int n = 1; n < s; ++n) {
      const double prod = m.weight(static_cast<std::size_t>(n)) *
                          m.weight(static_cast<std::size_t>(s - n));
      if (!leq_rel(bs, prod)) {
        r.submultiplicative = false;
        r.submult_witness = std::make_pair(n, s - n);
        r.detail = "b_" + std::to_string(s) + " = " + std::to_string(bs) + " > b_" +
                   std::to_string(n) + " b_" + std::to_string(s - n) + " = " + std::to_string(prod);
        break;
      }
      if (std::fabs(bs - prod) <= kEqualitySlack * std::max(std::fabs(bs), std::fabs(prod)))
        ++r.equality_cases;
    }
  }
  const double b1 = m.weight(1);
  for (int n = 1; n <= n_max; ++n) {
    if (!leq_rel(m.weight(static_cast<std::size_t>(n)), std::pow(b1, n))) {
      r.fekete = false;
      r.fekete_witness = n;
      if (r.detail.empty()) r.detail = "b_" + std::to_string(n) + " > b_1^" + std::to_string(n);
      break;
    }
  }
  r.sum_bound = m.total();
  r.summable = std::isfinite(r.sum_bound);
  return r;
}

struct DominationReport {
  bool holds = true;
  std::optional<int> witness;  // first n with b_n > a_n
  int checked_to = 0;
  std::size_t equality_cases = 0;
  bool extends_by_induction = false;
  std::string note;
};

/// Checks b_n <= a_n for n = 1..horizon. For geometric weights against a
/// power law, b_n / a_n is eventually non-increasing once
/// q <= ((n + b) / (n + 1 + b))^a; when this holds at the horizon the check
/// extends to all n.
inline DominationReport check_domination(const WeightedShiftMetric& m, const ContractionSeq& seq,
                                         int horizon) {
  if (horizon < 1) throw InvalidInput("domination horizon must be >= 1");
  DominationReport r;
  const int upto = std::min(horizon, seq.max_index());
  r.checked_to = upto;
  for (int n = 1; n <= upto; ++n) {
    const double b = m.weight(static_cast<std::size_t>(n));
    const double a = seq.coefficient(n);
    if (!leq_rel(b, a)) {
      r.holds = false;
      r.witness = n;
      r.note = "b_" + std::to_string(n) + " = " + std::to_string(b) + " > a_" + std::to_string(n) +
               " = " + std::to_string(a);
      return r;
    }
    if (std::fabs(a - b) <= kEqualitySlack * std::max(a, b)) ++r.equality_cases;
  }
  if (m.kind() == WeightedShiftMetric::Kind::geometric) {
    if (seq.kind() == ContractionSeq::Kind::exponential) {
      r.extends_by_induction = m.q() <= std::exp(-seq.lambda());
    } else if (auto pw = seq.power_law()) {
      const double n = upto;
      r.extends_by_induction = m.q() <= std::pow((n + pw->b) / (n + 1.0 + pw->b), pw->a);
    }
  }
  r.note = r.extends_by_induction
               ? "ratio b_{n+1}/b_n <= a_{n+1}/a_n for n >= " + std::to_string(upto) +
                     ", so domination extends to all n by induction"
               : "domination checked up to n = " + std::to_string(upto) + " only";
  return r;
}

/// Relation between b_n <= b_1^n and the witness condition b_n > a_1^n.
struct NonExponentialDiagnostic {
  bool literal_satisfiable = false;  // b_n > a_1^n >= b_1^n for all n <= n0, some n0 > 1
  int relaxed_n0 = 0;                // largest n0 with b_n > a_1^n on 2..n0, 0 if none
  bool conflicts_with_fekete = false;
  std::string note;
};

inline NonExponentialDiagnostic non_exponential_witness(const WeightedShiftMetric& m,
                                                        const ContractionSeq& seq, int n_max) {
  NonExponentialDiagnostic d;
  const double a1 = seq.coefficient(1);
  const double b1 = m.weight(1);
  // At n = 1 the literal condition reads b_1 > a_1 >= b_1.
  d.literal_satisfiable = false;
  for (int n = 2; n <= n_max; ++n) {
    if (m.weight(static_cast<std::size_t>(n)) > std::pow(a1, n))
      d.relaxed_n0 = n;
    else
      break;
  }
  d.conflicts_with_fekete = b1 <= a1;
  d.note = "literal condition fails at n = 1";
  if (d.conflicts_with_fekete)
    d.note += "; with b_1 <= a_1, sub-multiplicative weights give b_n <= b_1^n <= a_1^n";
  if (d.relaxed_n0 >= 2) d.note += "; b_n > a_1^n holds for 2 <= n <= " + std::to_string(d.relaxed_n0);
  return d;
}

// ---------------------------------------------------------------------------
// Cylinder contraction certificates

struct CylinderCertificate {
  bool pass = true;
  int depth = 0;
  double ratio = 1.0;         // d(x, y) / d(sigma^k x, sigma^k y)
  double worst_ratio = 0.0;   // max_i lhs_i / rhs_i
  int worst_index = -1;
  std::vector<double> margins;  // rhs_i - lhs_i, i = 0..k-1
};

/// Checks d(sigma^i x, sigma^i y) <= a_{k-i} d(sigma^k x, sigma^k y) for
/// 0 <= i < k, allowing for the metric error radii.
inline CylinderCertificate cylinder_contraction_check(const SymbolicPoint& x, const SymbolicPoint& y,
                                                      int k, const WeightedShiftMetric& m,
                                                      const ContractionSeq& seq,
                                                      std::optional<DominationReport> dom = {}) {
  if (k < 0) throw InvalidInput("cylinder depth must be >= 0");
  const auto uk = static_cast<std::size_t>(k);
  if (common_prefix(x, y, uk) < uk)
    throw PreconditionError("points do not share a cylinder of depth " + std::to_string(k));
  if (!dom) dom = check_domination(m, seq, m.horizon());
  if (!dom->holds)
    throw HypothesisError("weights not dominated by the contraction: " + dom->note);

  CylinderCertificate cert;
  cert.depth = k;
  if (k == 0) return cert;

  const auto base = m.distance(x.shift(uk), y.shift(uk));
  const auto top = m.distance(x, y);
  cert.ratio = base.value > 0.0 ? top.value / base.value : 0.0;
  for (int i = 0; i < k; ++i) {
    const auto lhs = i == 0 ? top : m.distance(x.shift(static_cast<std::size_t>(i)),
                                               y.shift(static_cast<std::size_t>(i)));
    const double a = seq.coefficient(k - i);
    const double rhs = a * base.value;
    const double slack = lhs.radius + a * base.radius + kEqualitySlack * std::max(lhs.value, rhs);
    cert.margins.push_back(rhs - lhs.value);
    if (lhs.value > rhs + slack) cert.pass = false;
    const double q = rhs > 0.0 ? lhs.value / rhs : (lhs.value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (q > cert.worst_ratio || cert.worst_index < 0) {
      cert.worst_ratio = q;
      cert.worst_index = i;
    }
  }
  return cert;
}

/// A random pair sharing exactly the first k symbols, words of length len.
inline std::pair<SymbolicPoint, SymbolicPoint> random_cylinder_pair(Rng& rng, int k, int len = 64) {
  if (k < 0 || len < 1 || k >= len) throw InvalidInput("need 0 <= k < len");
  std::vector<std::uint8_t> a(static_cast<std::size_t>(len)), b(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) {
    a[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.coin());
    b[static_cast<std::size_t>(i)] = i < k ? a[static_cast<std::size_t>(i)]
                                            : static_cast<std::uint8_t>(rng.coin());
  }
  b[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(1 - a[static_cast<std::size_t>(k)]);
  return {SymbolicPoint(std::move(a)), SymbolicPoint(std::move(b))};
}

/// D^-(p), D^+(p) for sigma under the weighted metric. Sample points agree
/// with p before position j and differ at j, where j is the first index whose
/// remaining weight fits in the radius.
inline ExpansionBounds local_expansion_bounds(const WeightedShiftMetric& m, const SymbolicPoint& p,
                                              std::span<const double> radii,
                                              std::size_t samples_per_radius = 16) {
  auto near = [&](const SymbolicPoint& c, double r, std::size_t i) -> std::optional<SymbolicPoint> {
    std::size_t j = 2;
    while (m.tail_after(j - 1) > r) {
      if (++j > 4096) return std::nullopt;
    }
    j += i % 4;
    const std::size_t len = std::max(c.length(), j + 8);
    std::vector<std::uint8_t> w(len);
    for (std::size_t n = 1; n <= len; ++n) w[n - 1] = static_cast<std::uint8_t>(c.symbol(n));
    w[j - 1] ^= 1U;
    for (std::size_t bit = 0; bit < 6; ++bit)
      if ((i >> (bit + 2)) & 1U) w[j + bit] ^= 1U;
    return SymbolicPoint(std::move(w), c.tail);
  };
  auto f = [](const SymbolicPoint& s) { return s.shift(1); };
  auto dist = [&](const SymbolicPoint& a, const SymbolicPoint& b) { return m.distance(a, b).value; };
  return local_expansion_bounds(p, radii, f, dist, near, samples_per_radius);
}

}  // namespace zoomax
