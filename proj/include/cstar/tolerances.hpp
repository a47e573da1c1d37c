#pragma once

#include <cfloat>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>

#include "cstar/errors.hpp"

namespace cstar {

// Relative tolerances used throughout the library. Each value is a factor
// applied to a natural scale of the quantity being tested:
//
//   positivity     eigenvalues >= -positivity * (1 + |a|) count as >= 0
//   invertibility  singular when the smallest singular value <= invertibility * |a|
//   frame          non-frame when the lower bound <= frame * D
//   margin         strict hypotheses need value < bound - margin * bound
//   near_boundary  hypotheses with |margin| < near_boundary * bound are flagged
//   check          conclusion residual tolerance
//   jacobi         Jacobi sweeps stop at off-diagonal mass < jacobi * |a|_F
struct Tolerances {
  double positivity = 1e-9;
  double invertibility = 1e-10;
  double frame = 1e-8;
  double margin = 1e-12;
  double near_boundary = 1e-6;
  double check = 1e-8;
  double jacobi = 1e-13;

  // Smallest value accepted for any field.
  static constexpr double floor = 4 * DBL_EPSILON;

  std::map<std::string, double> as_map() const {
    return {{"positivity", positivity}, {"invertibility", invertibility},
            {"frame", frame},           {"margin", margin},
            {"near_boundary", near_boundary}, {"check", check},
            {"jacobi", jacobi}};
  }

  // Throws std::invalid_argument on unknown keys or values below the floor.
  void set(const std::string& key, double value) {
    if (!(value >= floor) || value >= 1.0) {
      throw std::invalid_argument("tolerance '" + key + "' out of range [" +
                                  std::to_string(floor) + ", 1)");
    }
    if (key == "positivity") positivity = value;
    else if (key == "invertibility") invertibility = value;
    else if (key == "frame") frame = value;
    else if (key == "margin") margin = value;
    else if (key == "near_boundary") near_boundary = value;
    else if (key == "check") check = value;
    else if (key == "jacobi") jacobi = value;
    else throw std::invalid_argument("unknown tolerance '" + key + "'");
  }

  bool operator==(const Tolerances&) const = default;
};

inline constexpr const char* kToleranceEnv = "CSTAR_TOLERANCES";

// Parses "key=value,key=value" into overrides on top of `base`.
inline Tolerances parse_tolerance_overrides(const std::string& text,
                                            Tolerances base = {}) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("malformed tolerance override '" + item + "'");
    }
    auto trim = [](std::string t) {
      const auto b = t.find_first_not_of(" \t");
      const auto e = t.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    std::string key = trim(item.substr(0, eq));
    std::string val = trim(item.substr(eq + 1));
    char* end = nullptr;
    double v = std::strtod(val.c_str(), &end);
    if (end == val.c_str() || *end != '\0') {
      throw std::invalid_argument("malformed tolerance value '" + val + "'");
    }
    base.set(key, v);
  }
  return base;
}

// Defaults overridden by $CSTAR_TOLERANCES when set.
inline Tolerances tolerances_from_env() {
  const char* env = std::getenv(kToleranceEnv);
  if (env == nullptr) return {};
  return parse_tolerance_overrides(env);
}

}  // namespace cstar
