#pragma once
//
// Zooming contraction sequences alpha_n(r) and checks of the four axioms:
//   (1) alpha_n(r) < r                        contracting
//   (2) alpha_n(r) < alpha_n(s) for r < s     r-monotone
//   (3) alpha_m(alpha_n(r)) <= alpha_{m+n}(r) supermultiplicative
//   (4) sup_r sum_n alpha_n(r) < infinity     summable
// Lipschitz sequences alpha_n(r) = a_n r reduce (3) to a_m a_n <= a_{m+n}.
// Index 0 always carries a_0 = 1.

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zoomax/errors.hpp"

namespace zoomax {

/// Relative slack for comparisons that hold with equality in exact arithmetic.
inline constexpr double kEqualitySlack = 1e-12;

inline bool leq_rel(double a, double b, double slack = kEqualitySlack) {
  return a <= b + slack * std::max(std::fabs(a), std::fabs(b));
}

class ContractionSeq {
public:
  enum class Kind { exponential, lipschitz, general };

  struct PowerLaw {
    double a = 2.0;  // exponent
    double b = 1.0;  // shift
  };

  /// alpha_n(r) = e^{-lambda n} r.
  static ContractionSeq exponential(double lambda, int horizon = 4096) {
    if (!(lambda > 0.0)) throw InvalidInput("exponential contraction needs lambda > 0");
    ContractionSeq s;
    s.kind_ = Kind::exponential;
    s.lambda_ = lambda;
    s.horizon_ = horizon;
    return s;
  }

  /// alpha_n(r) = (n + b)^{-a} r.
  static ContractionSeq power(double a, double b, int horizon = 4096) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("power contraction needs a > 0 and b > 0");
    ContractionSeq s;
    s.kind_ = Kind::lipschitz;
    s.power_ = PowerLaw{a, b};
    s.horizon_ = horizon;
    return s;
  }

  /// Tabulated a_1, a_2, ...; entries must lie in [0, 1).
  static ContractionSeq table(std::vector<double> coefficients) {
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
      const double c = coefficients[i];
      if (!(c >= 0.0 && c < 1.0))
        throw InvalidInput("Lipschitz coefficient a_" + std::to_string(i + 1) + " = " +
                           std::to_string(c) + " outside [0, 1)");
    }
    ContractionSeq s;
    s.kind_ = Kind::lipschitz;
    s.horizon_ = static_cast<int>(coefficients.size());
    s.table_ = std::move(coefficients);
    return s;
  }

  /// One coefficient per line (or comma separated); '#' starts a comment.
  static ContractionSeq table_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open coefficient table " + path);
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double x;
      while (ls >> x) v.push_back(x);
    }
    if (v.empty()) throw InvalidInput("coefficient table " + path + " is empty");
    return table(std::move(v));
  }

  static ContractionSeq general(std::function<double(int, double)> alpha, int horizon) {
    ContractionSeq s;
    s.kind_ = Kind::general;
    s.general_ = std::move(alpha);
    s.horizon_ = horizon;
    return s;
  }

  Kind kind() const { return kind_; }
  int horizon() const { return horizon_; }
  bool has_closed_form() const { return kind_ == Kind::exponential || power_.has_value(); }
  std::optional<PowerLaw> power_law() const { return power_; }
  double lambda() const { return lambda_; }
  bool is_lipschitz() const { return kind_ != Kind::general; }

  /// a_n for Lipschitz and exponential kinds; a_0 = 1.
  double coefficient(int n) const {
    if (n < 0) throw InvalidInput("contraction index must be >= 0");
    if (n == 0) return 1.0;
    switch (kind_) {
      case Kind::exponential:
        return std::exp(-lambda_ * n);
      case Kind::lipschitz:
        if (power_) return std::pow(n + power_->b, -power_->a);
        if (n > static_cast<int>(table_.size()))
          throw InvalidInput("index " + std::to_string(n) + " beyond the tabulated horizon");
        return table_[static_cast<std::size_t>(n - 1)];
      case Kind::general:
        break;
    }
    throw CapabilityError("general contraction has no Lipschitz coefficients");
  }

  /// alpha_n(r); alpha_0 is the identity.
  double operator()(int n, double r) const {
    if (n == 0) return r;
    if (kind_ == Kind::general) return general_(n, r);
    return coefficient(n) * r;
  }

  /// Largest index the sequence can be evaluated at.
  int max_index() const {
    if (kind_ == Kind::lipschitz && !power_) return horizon_;
    return std::numeric_limits<int>::max();
  }

  std::string describe() const {
    std::ostringstream os;
    switch (kind_) {
      case Kind::exponential:
        os << "exp:lambda=" << lambda_;
        break;
      case Kind::lipschitz:
        if (power_)
          os << "power:a=" << power_->a << ",b=" << power_->b;
        else
          os << "table[" << table_.size() << "]";
        break;
      case Kind::general:
        os << "general";
        break;
    }
    return os.str();
  }

private:
  Kind kind_ = Kind::exponential;
  double lambda_ = 0.0;
  std::optional<PowerLaw> power_;
  std::vector<double> table_;
  std::function<double(int, double)> general_;
  int horizon_ = 0;
};

struct AxiomCheck {
  bool pass = true;
  std::vector<int> witness_index;      // (n) / (n) / (m, n)
  std::vector<double> witness_radius;  // (r) / (r, s) / (r)
  std::string detail;
  std::size_t equality_cases = 0;      // axiom 3 cases holding with equality
};

struct SummabilityCheck {
  bool pass = true;
  bool sampled = false;  // true when only checked on the r grid / horizon
  double partial_sum = 0.0;
  double tail_bound = 0.0;  // +inf when divergent
  std::string detail;
};

struct AxiomReport {
  AxiomCheck contracting;
  AxiomCheck monotone;
  AxiomCheck supermultiplicative;
  SummabilityCheck summable;
  bool valid = false;
};

namespace detail {
inline void fail(AxiomCheck& c, std::vector<int> idx, std::vector<double> radii, std::string why) {
  if (!c.pass) return;  // keep the first counterexample
  c.pass = false;
  c.witness_index = std::move(idx);
  c.witness_radius = std::move(radii);
  c.detail = std::move(why);
}
}  // namespace detail

/// Checks the four axioms for n, m <= n_max and r (and pairs r < s) in r_grid.
inline AxiomReport validate_contraction(const ContractionSeq& seq, std::vector<double> r_grid,
                                        int n_max) {
  if (n_max < 2) throw InvalidInput("validate_contraction needs n_max >= 2");
  if (r_grid.empty()) throw InvalidInput("validate_contraction needs a nonempty r grid");
  for (double r : r_grid)
    if (!(r > 0.0 && r < 1.0)) throw InvalidInput("radii must lie in (0, 1)");
  std::sort(r_grid.begin(), r_grid.end());
  r_grid.erase(std::unique(r_grid.begin(), r_grid.end()), r_grid.end());

  const int top = std::min(n_max, seq.max_index());
  if (seq.is_lipschitz()) {
    for (int n = 1; n <= top; ++n) {
      const double c = seq.coefficient(n);
      if (!(c >= 0.0 && c < 1.0))
        throw InvalidInput("Lipschitz coefficient a_" + std::to_string(n) + " = " +
                           std::to_string(c) + " outside [0, 1)");
    }
  }

  AxiomReport rep;
  for (int n = 1; n <= top; ++n) {
    for (double r : r_grid) {
      if (!(seq(n, r) < r))
        detail::fail(rep.contracting, {n}, {r},
                     "alpha_" + std::to_string(n) + "(r) >= r at r = " + std::to_string(r));
    }
    for (std::size_t i = 0; i < r_grid.size(); ++i)
      for (std::size_t j = i + 1; j < r_grid.size(); ++j)
        if (!(seq(n, r_grid[i]) < seq(n, r_grid[j])))
          detail::fail(rep.monotone, {n}, {r_grid[i], r_grid[j]},
                       "alpha_" + std::to_string(n) + " not strictly increasing");
  }

  // Axiom 3 over m, n <= n_max; tabulated sequences are limited to m + n <= horizon.
  for (int m = 1; m <= top; ++m) {
    for (int n = 1; n <= top; ++n) {
      if (m + n > seq.max_index() || m + n < 0) continue;
      if (seq.is_lipschitz()) {
        const double lhs = seq.coefficient(m) * seq.coefficient(n);
        const double rhs = seq.coefficient(m + n);
        if (!leq_rel(lhs, rhs)) {
          detail::fail(rep.supermultiplicative, {m, n}, {},
                       "a_" + std::to_string(m) + " a_" + std::to_string(n) + " = " +
                           std::to_string(lhs) + " > a_" + std::to_string(m + n) + " = " +
                           std::to_string(rhs));
        } else if (!(lhs < rhs)) {
          ++rep.supermultiplicative.equality_cases;
        }
      } else {
        for (double r : r_grid) {
          const double lhs = seq(m, seq(n, r));
          const double rhs = seq(m + n, r);
          if (!leq_rel(lhs, rhs))
            detail::fail(rep.supermultiplicative, {m, n}, {r},
                         "alpha_m(alpha_n(r)) > alpha_{m+n}(r)");
        }
      }
    }
  }

  // Axiom 4.
  auto& s4 = rep.summable;
  switch (seq.kind()) {
    case ContractionSeq::Kind::exponential: {
      for (int n = 1; n <= n_max; ++n) s4.partial_sum += seq.coefficient(n);
      const double q = std::exp(-seq.lambda());
      s4.tail_bound = std::pow(q, n_max + 1) / (1.0 - q);
      s4.detail = "geometric tail";
      break;
    }
    case ContractionSeq::Kind::lipschitz:
      for (int n = 1; n <= top; ++n) s4.partial_sum += seq.coefficient(n);
      if (auto p = seq.power_law()) {
        if (p->a > 1.0) {
          // sum_{n > N} (n + b)^{-a} <= int_N^inf (t + b)^{-a} dt
          s4.tail_bound = std::pow(n_max + p->b, 1.0 - p->a) / (p->a - 1.0);
          s4.detail = "integral-comparison tail";
        } else {
          s4.pass = false;
          s4.tail_bound = std::numeric_limits<double>::infinity();
          s4.detail = "p-series with exponent <= 1 diverges";
        }
      } else {
        s4.sampled = true;
        s4.detail = "tabulated coefficients: partial sum only";
      }
      break;
    case ContractionSeq::Kind::general: {
      s4.sampled = true;
      double sup = 0.0;
      for (double r : r_grid) {
        double acc = 0.0;
        for (int n = 1; n <= n_max; ++n) acc += seq(n, r);
        sup = std::max(sup, acc);
      }
      s4.partial_sum = sup;
      s4.detail = "sup over the r grid of partial sums (sampled)";
      if (!std::isfinite(sup)) s4.pass = false;
      break;
    }
  }

  rep.valid = rep.contracting.pass && rep.monotone.pass && rep.supermultiplicative.pass &&
              rep.summable.pass;
  return rep;
}

/// Default radius grid: 16 points spread over (0, 1).
inline std::vector<double> default_r_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 16; ++i) g.push_back(i / 17.0);
  return g;
}

struct TailSum {
  double value = 0.0;  // best estimate of sum_{i>=0} a_i^alpha
  double lower = 0.0;  // rigorous bracket
  double upper = 0.0;
  bool divergent = false;
  int horizon = 0;
};

/// sum_{i>=0} a_i^alpha with a_0 = 1: partial sum to the horizon plus an
/// analytic tail (geometric for exponential, integral comparison for power
/// laws). Power laws with a alpha <= 1 are flagged divergent.
inline TailSum tail_sum(const ContractionSeq& seq, double alpha, int horizon = 100000) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("Hoelder exponent must lie in (0, 1]");
  TailSum t;
  t.horizon = horizon;
  if (seq.kind() == ContractionSeq::Kind::exponential) {
    const double q = std::exp(-seq.lambda() * alpha);
    double partial = 0.0;
    for (int i = horizon; i >= 0; --i) partial += std::pow(q, i);
    const double tail = std::pow(q, horizon + 1) / (1.0 - q);
    t.value = t.upper = partial + tail;
    t.lower = partial;
    return t;
  }
  const auto p = seq.power_law();
  if (!p)
    throw CapabilityError("no closed-form tail for " + seq.describe() +
                          "; use partial_tail_sum for a horizon-only sum");
  const double ex = p->a * alpha;
  if (ex <= 1.0) {
    t.divergent = true;
    t.value = t.lower = t.upper = std::numeric_limits<double>::infinity();
    return t;
  }
  double partial = 0.0;
  for (int i = horizon; i >= 1; --i) partial += std::pow(i + p->b, -ex);
  partial += 1.0;  // a_0 = 1
  // Convex decreasing integrand: int_{N+1}^inf <= sum_{i>N} <= int_{N+1/2}^inf.
  auto tail_from = [&](double s) { return std::pow(s + p->b, 1.0 - ex) / (ex - 1.0); };
  t.lower = partial + tail_from(horizon + 1.0);
  t.upper = partial + tail_from(horizon + 0.5);
  t.value = t.upper;
  return t;
}

/// sum_{i=0}^{horizon} a_i^alpha without any tail estimate.
inline double partial_tail_sum(const ContractionSeq& seq, double alpha, int horizon) {
  double s = 0.0;
  for (int i = std::min(horizon, seq.max_index()); i >= 0; --i)
    s += std::pow(seq.coefficient(i), alpha);
  return s;
}

}  // namespace zoomax
