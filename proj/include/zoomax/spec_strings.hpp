#pragma once
//
// Parsers for "name:key=value,key=value" strings naming maps, potentials,
// contraction sequences and shift weights.

#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <variant>

#include "zoomax/contractions.hpp"
#include "zoomax/core.hpp"
#include "zoomax/families.hpp"
#include "zoomax/potential.hpp"
#include "zoomax/shift.hpp"

namespace zoomax {

struct ParsedSpec {
  std::string name;
  std::map<std::string, std::string> args;
  std::string raw;

  bool has(const std::string& k) const { return args.count(k) != 0; }

  double number(const std::string& k) const {
    auto it = args.find(k);
    if (it == args.end()) throw InvalidInput("'" + raw + "' is missing " + k + "=");
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
      throw InvalidInput("'" + raw + "': " + k + "=" + it->second + " is not a number");
    return v;
  }
  double number(const std::string& k, double fallback) const {
    return has(k) ? number(k) : fallback;
  }
  int integer(const std::string& k, int fallback) const {
    if (!has(k)) return fallback;
    const double v = number(k);
    if (v != static_cast<double>(static_cast<int>(v)))
      throw InvalidInput("'" + raw + "': " + k + " must be an integer");
    return static_cast<int>(v);
  }
  void only(std::initializer_list<const char*> allowed) const {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : args)
      if (!ok.count(k)) throw InvalidInput("'" + raw + "': unknown key " + k);
  }
};

/// "name", "name:k=v,k=v" or "name:payload" (payload kept under key "").
inline ParsedSpec parse_spec(const std::string& s) {
  ParsedSpec p;
  p.raw = s;
  const auto colon = s.find(':');
  p.name = s.substr(0, colon);
  if (p.name.empty()) throw InvalidInput("empty specification");
  if (colon == std::string::npos) return p;
  const std::string rest = s.substr(colon + 1);
  if (rest.find('=') == std::string::npos) {
    p.args[""] = rest;
    return p;
  }
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidInput("malformed item '" + item + "' in " + s);
    if (!p.args.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
      throw InvalidInput("duplicate key in " + s);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return p;
}

/// doubling | expanding:d=N | quadratic:a=A
inline MapModel<double> parse_map(const std::string& s) {
  const auto p = parse_spec(s);
  if (p.name == "doubling") {
    p.only({});
    return make_doubling();
  }
  if (p.name == "expanding") {
    p.only({"d"});
    return make_expanding_circle(p.integer("d", 2));
  }
  if (p.name == "quadratic") {
    p.only({"a"});
    return make_quadratic(p.number("a", 2.0));
  }
  throw InvalidInput("unknown map '" + s + "'");
}

inline bool is_viana_spec(const std::string& s) { return parse_spec(s).name == "viana"; }

/// viana:a0=..,alpha=..,d=..
inline VianaParams parse_viana(const std::string& s) {
  const auto p = parse_spec(s);
  if (p.name != "viana") throw InvalidInput("not a Viana map '" + s + "'");
  p.only({"a0", "alpha", "d"});
  VianaParams v;
  v.a0 = p.number("a0", v.a0);
  v.alpha = p.number("alpha", v.alpha);
  v.d = p.integer("d", v.d);
  return v;
}

/// cos | sin | one-minus-cos | cob-sin | mixed | zero | const:c=.. | table:path
inline HolderPotential parse_potential(const std::string& s, const MapModel<double>& map) {
  const auto p = parse_spec(s);
  if (p.name == "table") {
    if (!p.has("")) throw InvalidInput("table potential needs a path: table:FILE");
    return tabulated_potential_from_file(p.args.at(""));
  }
  if (p.name == "const") {
    p.only({"c"});
    return constant_potential(p.number("c"));
  }
  p.only({});
  if (p.name == "cos") return cos_potential();
  if (p.name == "sin") return sin_potential();
  if (p.name == "one-minus-cos") return one_minus_cos_potential();
  if (p.name == "cob-sin") return cob_sin_potential(map);
  if (p.name == "mixed") return mixed_potential();
  if (p.name == "zero") return constant_potential(0.0);
  throw InvalidInput("unknown potential '" + s + "'");
}

/// exp:lambda=.. | power:a=..,b=.. | table:path
inline ContractionSeq parse_contraction(const std::string& s) {
  const auto p = parse_spec(s);
  if (p.name == "exp") {
    p.only({"lambda"});
    return ContractionSeq::exponential(p.number("lambda"));
  }
  if (p.name == "power") {
    p.only({"a", "b"});
    return ContractionSeq::power(p.number("a"), p.number("b", 1.0));
  }
  if (p.name == "table") {
    if (!p.has("")) throw InvalidInput("table contraction needs a path: table:FILE");
    return ContractionSeq::table_from_file(p.args.at(""));
  }
  throw InvalidInput("unknown contraction sequence '" + s + "'");
}

/// geom:q=..,c=.. | power:a=..,b=..,c=..
inline WeightedShiftMetric parse_weights(const std::string& s, int horizon = 64) {
  const auto p = parse_spec(s);
  if (p.name == "geom") {
    p.only({"q", "c"});
    return WeightedShiftMetric::geometric(p.number("q"), p.number("c", 1.0), horizon);
  }
  if (p.name == "power") {
    p.only({"a", "b", "c"});
    return WeightedShiftMetric::power(p.number("a"), p.number("b", 1.0), p.number("c", 1.0), horizon);
  }
  throw InvalidInput("unknown weights '" + s + "'");
}

}  // namespace zoomax
