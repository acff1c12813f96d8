#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zoomax/core.hpp"

namespace zoomax {

/// A real observable on the circle with Hoelder exponent `alpha`.
struct HolderPotential {
  std::string name;
  std::function<double(double)> eval;
  double alpha = 1.0;
  std::optional<double> seminorm_hint;  // known ||phi||_alpha, when available

  double operator()(double x) const { return eval(x); }
};

inline HolderPotential constant_potential(double c) {
  return {"const:c=" + std::to_string(c), [c](double) { return c; }, 1.0, 0.0};
}

inline HolderPotential cos_potential() {
  return {"cos", [](double x) { return std::cos(kTwoPi * x); }, 1.0, kTwoPi};
}

inline HolderPotential sin_potential() {
  return {"sin", [](double x) { return std::sin(kTwoPi * x); }, 1.0, kTwoPi};
}

inline HolderPotential one_minus_cos_potential() {
  return {"one-minus-cos", [](double x) { return 1.0 - std::cos(kTwoPi * x); }, 1.0, kTwoPi};
}

/// sin(2 pi x) - sin(4 pi x) + 1 - cos(2 pi x): a doubling-map coboundary
/// plus a nonnegative term vanishing only at the fixed point 0.
inline HolderPotential mixed_potential() {
  return {"mixed",
          [](double x) {
            const double s = std::sin(kTwoPi * x);
            const double c = std::cos(kTwoPi * x);
            return s - 2.0 * s * c + 1.0 - c;
          },
          1.0, std::nullopt};
}

/// a - a o f for a given transfer function a and map f.
inline HolderPotential coboundary(std::string name, std::function<double(double)> a,
                                  const MapModel<double>& map,
                                  std::optional<double> seminorm_hint = std::nullopt) {
  auto fwd = map.forward;
  return {std::move(name), [a, fwd](double x) { return a(x) - a(fwd(x)); }, 1.0, seminorm_hint};
}

/// sin(2 pi x) - sin(2 pi f(x)); for the doubling map this is
/// sin(2 pi x) - sin(4 pi x) with Lipschitz constant 6 pi.
inline HolderPotential cob_sin_potential(const MapModel<double>& map) {
  std::optional<double> hint;
  if (map.circle_degree > 0) hint = kTwoPi * (1.0 + map.circle_degree);
  return coboundary(
      "cob-sin", [](double x) { return std::sin(kTwoPi * x); }, map, hint);
}

inline HolderPotential negated(const HolderPotential& phi) {
  auto f = phi.eval;
  return {"neg:" + phi.name, [f](double x) { return -f(x); }, phi.alpha, phi.seminorm_hint};
}

/// Periodic piecewise-linear interpolation of values on the uniform circle
/// grid k/n.
inline HolderPotential tabulated_potential(std::string name, std::vector<double> values) {
  if (values.size() < 2) throw InvalidInput("tabulated potential needs at least 2 values");
  auto data = std::make_shared<const std::vector<double>>(std::move(values));
  double lip = 0.0;
  const std::size_t n = data->size();
  for (std::size_t i = 0; i < n; ++i)
    lip = std::max(lip, std::fabs((*data)[(i + 1) % n] - (*data)[i]) * static_cast<double>(n));
  return {std::move(name),
          [data](double x) {
            const std::size_t m = data->size();
            const double t = wrap01(x) * static_cast<double>(m);
            const auto i = std::min(static_cast<std::size_t>(t), m - 1);
            const double w = t - static_cast<double>(i);
            return (1.0 - w) * (*data)[i] + w * (*data)[(i + 1) % m];
          },
          1.0, lip};
}

/// Reads one value per line (or comma separated); '#' starts a comment.
inline HolderPotential tabulated_potential_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open potential table " + path);
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    double x;
    while (ls >> x) v.push_back(x);
  }
  return tabulated_potential("table:" + path, std::move(v));
}

}  // namespace zoomax
