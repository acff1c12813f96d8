#pragma once
//
// Command dispatcher for the zoomax tool. `run` is usable in-process; the
// executable in tools/ only forwards argv.
//
// Exit codes: 0 success, 1 a verified inequality failed, 2 usage or
// configuration error, 3 resource budget exceeded.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zoomax/contractions.hpp"
#include "zoomax/core.hpp"
#include "zoomax/ergodic.hpp"
#include "zoomax/errors.hpp"
#include "zoomax/families.hpp"
#include "zoomax/potential.hpp"
#include "zoomax/rng.hpp"
#include "zoomax/shift.hpp"
#include "zoomax/spec_strings.hpp"
#include "zoomax/zooming.hpp"

namespace zoomax::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kResource = 3 };

inline int exit_code_for(const std::string& kind) {
  if (kind == "resource") return kResource;
  if (kind == "hypothesis" || kind == "convergence") return kVerifyFailed;
  return kUsage;
}

struct RunConfig {
  std::string verb;
  std::string sub;

  std::string map = "doubling";
  std::string potential = "mixed";
  std::string seq = "exp:lambda=0.69314718055994531";
  std::string weights = "geom:q=0.25";
  std::string contraction = "power:a=2,b=1";
  std::string construction = "both";  // ergopt verify: mane | lax-oleinik | both
  std::string centering = "inf";      // inf | sup | <number>
  std::string direction = "sup";      // ergopt value
  std::string out = ".";

  int depth = 12;
  int grid = 10;
  int max_period = 12;
  int horizon = 100;
  int pairs = 1000;
  int samples = 100;
  int max_iter = 10000;
  int n = 0;  // zoom distortion: 0 selects the last hyperbolic time
  int length = 64;
  int n_max = 64;

  double tol = 1e-2;
  double lo_tol = 1e-8;
  double alpha = 1.0;
  double sigma = 0.5;
  double epsilon = 0.1;
  double beta = 0.0;
  double b_exp = 0.0;
  double x = 0.3;
  double delta = 0.1;
  double a = 2.0;
  double lambda = 1.3862943611198906;  // ln 4
  double lo = 0.0;
  double hi = 0.1;

  std::uint64_t seed = kDefaultSeed;
};

using KnobRef = std::variant<std::string*, int*, double*, std::uint64_t*>;

struct Knob {
  const char* key;  // JSON key; the flag is --key with '_' -> '-'
  KnobRef ref;
  const char* help;
};

inline std::vector<Knob> knobs(RunConfig& c) {
  return {
      {"map", &c.map, "map: doubling | expanding:d=N | quadratic:a=A | viana:a0=,alpha=,d="},
      {"potential", &c.potential, "cos | sin | one-minus-cos | cob-sin | mixed | zero | const:c= | table:FILE"},
      {"seq", &c.seq, "contraction sequence: exp:lambda= | power:a=,b= | table:FILE"},
      {"weights", &c.weights, "shift weights: geom:q=,c= | power:a=,b=,c="},
      {"contraction", &c.contraction, "contraction sequence dominating the shift weights"},
      {"construction", &c.construction, "mane | lax-oleinik | both"},
      {"centering", &c.centering, "inf | sup | numeric constant"},
      {"direction", &c.direction, "sup | inf"},
      {"out", &c.out, "output directory"},
      {"depth", &c.depth, "tree depth N, or maximal cylinder depth for shift check"},
      {"grid", &c.grid, "grid size exponent m (grid of d^m points)"},
      {"max_period", &c.max_period, "largest period searched"},
      {"horizon", &c.horizon, "orbit length"},
      {"pairs", &c.pairs, "number of sampled pairs"},
      {"samples", &c.samples, "number of sampled points"},
      {"max_iter", &c.max_iter, "Lax-Oleinik iteration cap"},
      {"n", &c.n, "time index (0: last detected hyperbolic time)"},
      {"length", &c.length, "symbolic word length"},
      {"n_max", &c.n_max, "largest index checked"},
      {"tol", &c.tol, "defect tolerance"},
      {"lo_tol", &c.lo_tol, "Lax-Oleinik stopping tolerance"},
      {"alpha", &c.alpha, "Hoelder exponent"},
      {"sigma", &c.sigma, "hyperbolic contraction rate"},
      {"epsilon", &c.epsilon, "truncation radius"},
      {"beta", &c.beta, "critical order exponent"},
      {"b_exp", &c.b_exp, "recurrence exponent (0: default)"},
      {"x", &c.x, "base point"},
      {"delta", &c.delta, "ball radius"},
      {"a", &c.a, "quadratic parameter"},
      {"lambda", &c.lambda, "Collet-Eckmann rate"},
      {"lo", &c.lo, "covering region start"},
      {"hi", &c.hi, "covering region end"},
      {"seed", &c.seed, "random seed"},
  };
}

inline std::string flag_name(const char* key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

inline Json echo(RunConfig& c) {
  Json j;
  j["verb"] = c.verb + " " + c.sub;
  for (const auto& k : knobs(c)) std::visit([&](auto* p) { j[k.key] = *p; }, k.ref);
  return j;
}

/// Strict: unknown keys and mistyped values are rejected.
inline void apply_json(RunConfig& c, const Json& j) {
  if (!j.is_object()) throw InvalidInput("config file must hold a JSON object");
  auto ks = knobs(c);
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto k = std::find_if(ks.begin(), ks.end(), [&](const Knob& kb) { return it.key() == kb.key; });
    if (k == ks.end()) throw InvalidInput("unknown config key '" + it.key() + "'");
    const Json& v = it.value();
    std::visit(
        [&](auto* p) {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw InvalidInput("config key '" + it.key() + "' must be a string");
            *p = v.get<std::string>();
          } else if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) throw InvalidInput("config key '" + it.key() + "' must be a number");
            *p = v.get<double>();
          } else {
            if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0))
              throw InvalidInput("config key '" + it.key() + "' must be an integer");
            *p = v.get<T>();
          }
        },
        k->ref);
  }
}

inline void check_range(const char* key, double v, double lo, double hi) {
  if (!(v >= lo && v <= hi))
    throw InvalidInput(std::string(key) + " = " + std::to_string(v) + " outside [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

inline void validate(const RunConfig& c) {
  check_range("depth", c.depth, 0, 40);
  check_range("grid", c.grid, 0, 26);
  check_range("max_period", c.max_period, 1, 24);
  check_range("horizon", c.horizon, 1, 1e7);
  check_range("pairs", c.pairs, 1, 1e7);
  check_range("samples", c.samples, 1, 1e6);
  check_range("max_iter", c.max_iter, 1, 1e7);
  check_range("n", c.n, 0, 1e7);
  check_range("length", c.length, 1, 4096);
  check_range("n_max", c.n_max, 2, 1e5);
  check_range("alpha", c.alpha, 1e-6, 1.0);
  if (!(c.tol >= 0.0)) throw InvalidInput("tol must be >= 0");
  if (!(c.lo_tol > 0.0)) throw InvalidInput("lo_tol must be > 0");
}

// ---------------------------------------------------------------------------
// Output

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<const char*> header)
      : out_(path) {
    if (!out_) throw InvalidInput("cannot write " + path.string());
    bool first = true;
    for (const char* h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }

  template <class... Ts>
  void row(const Ts&... vs) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(vs), first = false), ...);
    out_ << '\n';
  }

private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <class I>
    requires std::is_integral_v<I>
  static std::string cell(I v) {
    return std::to_string(v);
  }
  std::ofstream out_;
};

struct Outcome {
  Json results = Json::object();
  std::vector<std::string> artifacts;
  bool verified = true;
};

inline Json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Verbs

inline Json axiom_json(const AxiomCheck& c) {
  return {{"pass", c.pass}, {"witness_index", c.witness_index},
          {"witness_radius", c.witness_radius}, {"detail", c.detail},
          {"equality_cases", c.equality_cases}};
}

inline Outcome contract_validate(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const auto seq = parse_contraction(c.seq);
  const auto rep = validate_contraction(seq, default_r_grid(), c.n_max);
  o.results["sequence"] = seq.describe();
  o.results["valid"] = rep.valid;
  o.results["contracting"] = axiom_json(rep.contracting);
  o.results["monotone"] = axiom_json(rep.monotone);
  o.results["supermultiplicative"] = axiom_json(rep.supermultiplicative);
  o.results["summable"] = {{"pass", rep.summable.pass},
                           {"sampled", rep.summable.sampled},
                           {"partial_sum", num(rep.summable.partial_sum)},
                           {"tail_bound", num(rep.summable.tail_bound)},
                           {"detail", rep.summable.detail}};
  if (seq.has_closed_form()) {
    const auto t = tail_sum(seq, c.alpha);
    o.results["tail_sum"] = {{"alpha", c.alpha},     {"value", num(t.value)},
                             {"lower", num(t.lower)}, {"upper", num(t.upper)},
                             {"divergent", t.divergent}};
  }
  CsvWriter csv(dir / "contraction.csv", {"n", "a_n"});
  const int top = std::min(c.n_max, seq.max_index());
  for (int k = 1; k <= top; ++k) csv.row(k, seq.coefficient(k));
  o.artifacts.push_back("contraction.csv");
  o.verified = rep.valid;
  return o;
}

inline Json orbit_json(const PeriodicOrbit& p) {
  return {{"period", p.period}, {"points", p.points}, {"average", num(p.average)}};
}

inline Outcome ergopt_value(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const auto map = parse_map(c.map);
  const auto phi = parse_potential(c.potential, map);
  Direction dir_v;
  if (c.direction == "sup")
    dir_v = Direction::sup;
  else if (c.direction == "inf")
    dir_v = Direction::inf;
  else
    throw InvalidInput("direction must be sup or inf");
  const auto est = estimate_ergodic_value(map, phi, c.max_period, dir_v);
  o.results["value"] = est.value;
  o.results["direction"] = c.direction;
  o.results["max_period"] = est.max_period;
  o.results["witness"] = orbit_json(est.witness);
  o.results["witness_period"] = est.witness.period;

  CsvWriter csv(dir / "periodic.csv", {"period", "code", "first_point", "average"});
  for (int p = 1; p <= c.max_period; ++p)
    for (auto& cyc : periodic_cycles(map, p))
      csv.row(p, cyc.code, cyc.points.front(), orbit_average(cyc, phi));
  o.artifacts.push_back("periodic.csv");
  return o;
}

inline std::vector<double> compatible_grid(const MapModel<double>& map, int m) {
  if (map.circle_degree < 2)
    throw CapabilityError("subaction grids need an expanding circle map; got " + map.name);
  return circle_grid(map.circle_degree, m);
}

inline double resolve_centering(const RunConfig& c, const MapModel<double>& map,
                                const HolderPotential& phi) {
  if (c.centering == "inf") return default_centering(map, phi, c.max_period);
  if (c.centering == "sup")
    return estimate_ergodic_value(map, phi, c.max_period, Direction::sup).value;
  char* end = nullptr;
  const double v = std::strtod(c.centering.c_str(), &end);
  if (end == c.centering.c_str() || *end != '\0')
    throw InvalidInput("centering must be inf, sup or a number");
  return v;
}

/// ||phi||_alpha * sum_i d^{-i alpha}, with ||phi||_alpha estimated on 4096 points.
inline double seminorm_bound(const MapModel<double>& map, const HolderPotential& phi, double alpha) {
  const double s = holder_seminorm_estimate(phi, alpha, 4096);
  return s / (1.0 - std::pow(static_cast<double>(map.circle_degree), -alpha));
}

inline Json defect_json(const DefectReport& r) {
  return {{"min_defect", r.min_defect},
          {"argmin", r.argmin},
          {"mean_defect", r.mean_defect},
          {"exact_invariant_ok", r.exact_invariant_ok},
          {"exact_max_violation", num(r.exact_max_violation)},
          {"tol", r.tol},
          {"ok", r.ok()}};
}

inline Outcome ergopt_subaction(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const auto map = parse_map(c.map);
  const auto phi = parse_potential(c.potential, map);
  const double cent = resolve_centering(c, map, phi);
  const auto sub = mane_subaction(map, phi, cent, compatible_grid(map, c.grid), c.depth);
  const auto rep = verify_subcohomology(map, phi, sub, c.tol);
  const double semi = holder_seminorm_estimate(sub.grid, sub.values, c.alpha);
  const double bound = seminorm_bound(map, phi, c.alpha);

  o.results["centering"] = cent;
  o.results["depth"] = sub.depth;
  o.results["grid_points"] = sub.grid.size();
  o.results["offset"] = sub.offset;
  o.results["divergent"] = sub.divergent;
  o.results["note"] = sub.note;
  o.results["depth_minima"] = sub.depth_minima;
  o.results["defect"] = defect_json(rep);
  o.results["min_defect"] = rep.min_defect;
  o.results["seminorm"] = semi;
  o.results["seminorm_bound"] = bound;
  o.results["alpha"] = c.alpha;

  CsvWriter csv(dir / "subaction.csv", {"grid_x", "lambda", "defect"});
  for (std::size_t i = 0; i < sub.grid.size(); ++i) csv.row(sub.grid[i], sub.values[i], rep.defects[i]);
  o.artifacts.push_back("subaction.csv");
  o.verified = rep.ok() && !sub.divergent;
  return o;
}

inline Outcome ergopt_verify(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const auto map = parse_map(c.map);
  const auto phi = parse_potential(c.potential, map);
  const double cent = resolve_centering(c, map, phi);
  const bool mane = c.construction == "mane" || c.construction == "both";
  const bool lo = c.construction == "lax-oleinik" || c.construction == "both";
  if (!mane && !lo) throw InvalidInput("construction must be mane, lax-oleinik or both");
  const auto grid = compatible_grid(map, c.grid);

  CsvWriter csv(dir / "verify.csv", {"construction", "grid_x", "lambda", "defect"});
  o.results["centering"] = cent;
  auto emit = [&](const char* name, const SubactionGrid& sub) {
    const auto rep = verify_subcohomology(map, phi, sub, c.tol);
    Json j = defect_json(rep);
    j["seminorm"] = holder_seminorm_estimate(sub.grid, sub.values, c.alpha);
    if (sub.construction == Construction::lax_oleinik) {
      j["iterations"] = sub.iterations;
      j["residual"] = sub.residual;
    } else {
      j["depth"] = sub.depth;
      j["divergent"] = sub.divergent;
    }
    o.results[name] = j;
    for (std::size_t i = 0; i < sub.grid.size(); ++i)
      csv.row(std::string(name), sub.grid[i], sub.values[i], rep.defects[i]);
    o.verified = o.verified && rep.ok() && !sub.divergent;
  };
  if (mane) emit("mane", mane_subaction(map, phi, cent, grid, c.depth));
  if (lo) emit("lax_oleinik", lax_oleinik_fixed_point(map, phi, cent, grid, c.lo_tol, c.max_iter));
  o.results["seminorm_bound"] = seminorm_bound(map, phi, c.alpha);
  o.artifacts.push_back("verify.csv");
  return o;
}

inline Outcome ergopt_sandwich(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const auto map = parse_map(c.map);
  const auto phi = parse_potential(c.potential, map);
  const auto r = two_sided_sandwich(map, phi, compatible_grid(map, c.grid), c.depth, c.tol,
                                    c.max_period);
  o.results["lower"] = defect_json(r.lower_defect);
  o.results["upper"] = defect_json(r.upper_defect);
  CsvWriter csv(dir / "sandwich.csv", {"grid_x", "lambda1", "lambda2", "defect_lower", "defect_upper"});
  for (std::size_t i = 0; i < r.lambda1.size(); ++i)
    csv.row(r.lower_mane.grid[i], r.lambda1[i], r.lambda2[i], r.lower_defect.defects[i],
            r.upper_defect.defects[i]);
  o.artifacts.push_back("sandwich.csv");
  o.verified = r.lower_defect.ok() && r.upper_defect.ok();
  return o;
}

inline HyperbolicParams hyper_params(const RunConfig& c) {
  HyperbolicParams p;
  p.sigma = c.sigma;
  p.epsilon = c.epsilon;
  p.beta = c.beta;
  p.b_exp = c.b_exp;
  p.validate();
  return p;
}

inline Outcome zoom_times(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const auto map = parse_map(c.map);
  const auto rec = detect_hyperbolic_times(map, c.x, hyper_params(c), static_cast<std::size_t>(c.horizon));
  o.results["x"] = c.x;
  o.results["count"] = rec.indices.size();
  o.results["frequency"] = rec.frequency;
  CsvWriter csv(dir / "times.csv", {"n"});
  for (auto n : rec.indices) csv.row(n);
  o.artifacts.push_back("times.csv");
  return o;
}

inline std::vector<double> sample_domain(const MapModel<double>& map, Rng& rng, int count) {
  std::vector<double> pts;
  for (int i = 0; i < count; ++i) pts.push_back(rng.uniform(map.domain.lo, map.domain.hi));
  return pts;
}

inline Outcome zoom_freq(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const auto map = parse_map(c.map);
  Rng rng(c.seed);
  const auto pts = sample_domain(map, rng, c.samples);
  const auto st = hyperbolic_frequency<double>(map, pts, hyper_params(c), static_cast<std::size_t>(c.horizon));
  o.results["theta_min"] = st.min;
  o.results["theta_mean"] = st.mean;
  o.results["theta_max"] = st.max;
  CsvWriter csv(dir / "freq.csv", {"x", "frequency"});
  for (std::size_t i = 0; i < pts.size(); ++i) csv.row(pts[i], st.per_point[i]);
  o.artifacts.push_back("freq.csv");
  return o;
}

inline Outcome zoom_distortion(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const auto map = parse_map(c.map);
  const auto params = hyper_params(c);
  std::size_t n = static_cast<std::size_t>(c.n);
  if (n == 0) {
    const auto rec = detect_hyperbolic_times(map, c.x, params, static_cast<std::size_t>(c.horizon));
    if (rec.indices.empty()) throw HypothesisError("no hyperbolic time up to the horizon");
    n = rec.indices.back();
  }
  const auto pairs = static_cast<std::size_t>(c.pairs);
  const auto d1 = check_bounded_distortion(map, c.x, n, pairs, c.delta, c.seed);
  const auto d2 = check_bounded_distortion(map, c.x, n, 2 * pairs, c.delta, c.seed);
  const auto seq = ContractionSeq::exponential(-0.5 * std::log(c.sigma));
  const auto pre = verify_preball_contraction(map, c.x, n, seq, pairs, c.delta, c.seed);
  o.results["n"] = n;
  o.results["rho_hat"] = d1.rho_hat;
  o.results["rho_hat_double_sample"] = d2.rho_hat;
  o.results["samples"] = d1.samples;
  o.results["worst_pair"] = {{"y", d1.worst_y}, {"z", d1.worst_z}, {"n", n}};
  o.results["preball"] = {{"sequence", seq.describe()}, {"pass", pre.pass},
                          {"worst_ratio", pre.worst_ratio}, {"worst_margin", num(pre.worst_margin)},
                          {"pullback_failures", pre.pullback_failures}};
  CsvWriter csv(dir / "distortion.csv", {"pairs", "samples", "rho_hat"});
  csv.row(pairs, d1.samples, d1.rho_hat);
  csv.row(2 * pairs, d2.samples, d2.rho_hat);
  o.artifacts.push_back("distortion.csv");
  o.verified = pre.pass;
  return o;
}

inline Outcome shift_check(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const auto m = parse_weights(c.weights, c.length);
  const auto seq = parse_contraction(c.contraction);
  if (c.depth >= c.length) throw InvalidInput("cylinder depth must be below the word length");
  const auto wrep = validate_weights(m, c.n_max);
  const auto dom = check_domination(m, seq, c.n_max);
  const auto diag = non_exponential_witness(m, seq, c.n_max);
  o.results["weights"] = m.describe();
  o.results["contraction"] = seq.describe();
  Json wj = {{"valid", wrep.valid()},
             {"submultiplicative", wrep.submultiplicative},
             {"equality_cases", wrep.equality_cases},
             {"summable", wrep.summable},
             {"sum_bound", num(wrep.sum_bound)},
             {"fekete", wrep.fekete},
             {"detail", wrep.detail}};
  if (wrep.submult_witness) wj["witness"] = {wrep.submult_witness->first, wrep.submult_witness->second};
  o.results["weight_axioms"] = wj;
  o.results["domination"] = {{"holds", dom.holds}, {"checked_to", dom.checked_to},
                             {"extends_by_induction", dom.extends_by_induction}, {"note", dom.note}};
  o.results["non_exponential"] = {{"literal_satisfiable", diag.literal_satisfiable},
                                  {"relaxed_n0", diag.relaxed_n0}, {"note", diag.note}};
  if (!dom.holds) throw HypothesisError("weights not dominated by the contraction: " + dom.note);

  Rng rng(c.seed);
  const auto depths = static_cast<std::size_t>(c.depth) + 1;
  std::vector<double> worst(depths, 0.0);
  std::vector<long> count(depths, 0), fails(depths, 0);
  for (int i = 0; i < c.pairs; ++i) {
    const int k = static_cast<int>(rng.below(depths));
    const auto [x, y] = random_cylinder_pair(rng, k, c.length);
    const auto cert = cylinder_contraction_check(x, y, k, m, seq, dom);
    const auto ks = static_cast<std::size_t>(k);
    ++count[ks];
    if (!cert.pass) ++fails[ks];
    worst[ks] = std::max(worst[ks], cert.worst_ratio);
  }
  long total_fail = 0;
  double worst_all = 0.0;
  CsvWriter csv(dir / "shift.csv", {"depth", "pairs", "worst_ratio", "failures"});
  for (std::size_t k = 0; k < depths; ++k) {
    csv.row(k, count[k], worst[k], fails[k]);
    total_fail += fails[k];
    worst_all = std::max(worst_all, worst[k]);
  }
  o.results["pairs"] = c.pairs;
  o.results["failures"] = total_fail;
  o.results["worst_ratio"] = worst_all;
  o.artifacts.push_back("shift.csv");
  o.verified = total_fail == 0 && wrep.valid();
  return o;
}

inline Outcome family_ce_check(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  if (!(c.a > 0.0 && c.a <= 2.0)) throw InvalidInput("quadratic parameter a must lie in (0, 2]");
  const QuadraticFamily fam{c.a};
  const auto r = collet_eckmann_check(fam, c.lambda, c.horizon);
  o.results["a"] = c.a;
  o.results["lambda"] = c.lambda;
  o.results["pass"] = r.pass;
  o.results["first_failure"] = r.first_failure;
  o.results["min_margin"] = num(r.min_margin);
  o.results["argmin_margin"] = r.argmin_margin;
  CsvWriter csv(dir / "ce.csv", {"n", "log_derivative", "margin"});
  for (std::size_t i = 0; i < r.log_derivative.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    csv.row(i + 1, r.log_derivative[i], r.log_derivative[i] - c.lambda * n);
  }
  o.artifacts.push_back("ce.csv");
  o.verified = r.pass;
  return o;
}

inline Outcome family_viana_freq(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const VianaParams vp = is_viana_spec(c.map) ? parse_viana(c.map) : VianaParams{};
  const auto map = make_viana(vp);
  const auto strip = find_viana_strip(vp);
  Rng rng(c.seed);
  std::vector<Point2> pts;
  for (int i = 0; i < c.samples; ++i) {
    const double th = rng.uniform();
    const double x = rng.uniform(-strip.half_width, strip.half_width);
    pts.push_back({th, x});
  }
  const auto st = hyperbolic_frequency<Point2>(map, pts, hyper_params(c), static_cast<std::size_t>(c.horizon));
  o.results["strip_half_width"] = strip.half_width;
  o.results["strip_verified"] = strip.verified;
  o.results["theta_min"] = st.min;
  o.results["theta_mean"] = st.mean;
  o.results["theta_max"] = st.max;
  CsvWriter csv(dir / "viana_freq.csv", {"theta", "x", "frequency"});
  for (std::size_t i = 0; i < pts.size(); ++i) csv.row(pts[i].theta, pts[i].x, st.per_point[i]);
  o.artifacts.push_back("viana_freq.csv");
  o.verified = st.min > 0.0;
  return o;
}

inline Outcome core_cover(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const auto map = parse_map(c.map);
  const auto r = covering_time(map, c.lo, c.hi);
  o.results["lo"] = c.lo;
  o.results["hi"] = c.hi;
  o.results["steps"] = r.steps;
  o.results["exceeded"] = r.exceeded;
  CsvWriter csv(dir / "cover.csv", {"lo", "hi", "steps"});
  csv.row(c.lo, c.hi, r.steps);
  o.artifacts.push_back("cover.csv");
  o.verified = !r.exceeded;
  return o;
}

using VerbFn = Outcome (*)(const RunConfig&, const std::filesystem::path&);

struct VerbEntry {
  const char* verb;
  const char* sub;
  VerbFn fn;
};

inline const std::vector<VerbEntry>& verb_table() {
  static const std::vector<VerbEntry> t = {
      {"contract", "validate", contract_validate}, {"ergopt", "value", ergopt_value},
      {"ergopt", "subaction", ergopt_subaction},   {"ergopt", "verify", ergopt_verify},
      {"ergopt", "sandwich", ergopt_sandwich},     {"zoom", "times", zoom_times},
      {"zoom", "freq", zoom_freq},                 {"zoom", "distortion", zoom_distortion},
      {"shift", "check", shift_check},             {"family", "ce-check", family_ce_check},
      {"family", "viana-freq", family_viana_freq}, {"core", "cover", core_cover},
  };
  return t;
}

inline std::string usage() {
  std::string s = "usage: zoomax VERB SUBVERB [--config FILE] [--key value ...]\nverbs:\n";
  for (const auto& v : verb_table()) s += std::string("  ") + v.verb + " " + v.sub + "\n";
  s += "run 'zoomax VERB SUBVERB --help' for the flag list\n";
  return s;
}

inline int report_error(std::ostream& err, const std::string& kind, const std::string& what) {
  const int code = exit_code_for(kind);
  Json j = {{"error", {{"kind", kind}, {"message", what}, {"exit_code", code}}}};
  err << j.dump() << '\n';
  return code;
}

/// Parses args (without the program name), runs the verb, writes
/// summary.json and CSV files into --out, prints the summary to `out`.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  RunConfig cfg;
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    (args.empty() ? err : out) << usage();
    return args.empty() ? kUsage : kOk;
  }
  if (args.size() < 2) return report_error(err, "invalid_input", "missing subverb\n" + usage());
  cfg.verb = args[0];
  cfg.sub = args[1];
  const auto& table = verb_table();
  auto entry = std::find_if(table.begin(), table.end(), [&](const VerbEntry& v) {
    return cfg.verb == v.verb && cfg.sub == v.sub;
  });
  if (entry == table.end())
    return report_error(err, "invalid_input", "unknown command '" + cfg.verb + " " + cfg.sub + "'");

  try {
    std::vector<std::string> rest(args.begin() + 2, args.end());
    // The config file is applied first so that flags override it.
    for (std::size_t i = 0; i < rest.size(); ++i) {
      std::string path;
      if (rest[i] == "--config" && i + 1 < rest.size())
        path = rest[i + 1];
      else if (rest[i].rfind("--config=", 0) == 0)
        path = rest[i].substr(9);
      else
        continue;
      std::ifstream in(path);
      if (!in) throw InvalidInput("cannot open config file " + path);
      Json j;
      try {
        j = Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("config file " + path + ": " + e.what());
      }
      apply_json(cfg, j);
    }

    CLI::App app{"zoomax " + cfg.verb + " " + cfg.sub};
    app.allow_extras(false);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    for (const auto& k : knobs(cfg))
      std::visit([&](auto* p) { app.add_option(flag_name(k.key), *p, k.help); }, k.ref);
    std::reverse(rest.begin(), rest.end());
    try {
      app.parse(rest);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::ParseError& e) {
      throw InvalidInput(e.what());
    }
    validate(cfg);

    const std::filesystem::path dir(cfg.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InvalidInput("cannot create output directory " + cfg.out + ": " + ec.message());

    const auto t0 = std::chrono::steady_clock::now();
    Outcome res = entry->fn(cfg, dir);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json summary;
    summary["verb"] = cfg.verb + " " + cfg.sub;
    summary["inputs"] = echo(cfg);
    summary["seed"] = cfg.seed;
    summary["results"] = res.results;
    summary["verified"] = res.verified;
    res.artifacts.push_back("summary.json");
    summary["artifacts"] = res.artifacts;
    summary["timing"] = {{"wall_seconds", wall}};
    std::ofstream js(dir / "summary.json");
    if (!js) throw InvalidInput("cannot write summary.json in " + cfg.out);
    js << summary.dump(2) << '\n';
    out << summary.dump(2) << '\n';
    return res.verified ? kOk : kVerifyFailed;
  } catch (const Error& e) {
    return report_error(err, e.kind(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return report_error(err, "invalid_input", e.what());
  } catch (const std::exception& e) {
    return report_error(err, "internal", e.what());
  }
}

}  // namespace zoomax::cli
