#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cstar/serialize.hpp"

// Scenario files:
//
//   {
//     "shape": [2, 1],            block sizes of A
//     "rank": 2,                  k, the module is A^k
//     "seed": 7,                  default seed for sampled checks and trials
//     "tolerances": {"check": 1e-8},
//     "objects": [
//       {"id": "X", "type": "frame", "vectors": [...]},
//       {"id": "U", "type": "operator", "entries": [[...]]},
//       {"id": "m", "type": "diagonal_symbol", "entries": [...]},
//       {"id": "E", "type": "standard_basis", "size": 2},
//       {"id": "I", "type": "identity", "size": 2},
//       {"id": "Y", "generate": {"kind": "random_frame", "seed": 3, "params": {"N": 4}}}
//     ],
//     "checks": [
//       {"theorem": "riesz_invertibility", "args": {"X": "E", "Y": "E", "U": "U"}},
//       {"theorem": "dual_multiplier", "trials": 50}
//     ]
//   }
namespace cstar::scenario {

using io::json;
using io::parse_error;

using Object = std::variant<FrameSequence, ModuleOperator, DiagonalSymbol>;

inline const char* kind_name(const Object& o) {
  switch (o.index()) {
    case 0: return "sequence";
    case 1: return "operator";
    default: return "diagonal_symbol";
  }
}

struct Check {
  std::string theorem;
  std::map<std::string, std::string> args;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string path;
};

struct Scenario {
  AlgebraShape shape{std::vector<int>{1}};
  int rank = 1;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  std::map<std::string, Object> objects;
  std::vector<std::string> order;
  std::vector<Check> checks;
};

// Argument names per theorem; a trailing '?' marks an optional argument.
inline const std::map<std::string, std::vector<std::string>>& theorem_arguments() {
  static const std::map<std::string, std::vector<std::string>> args = {
      {"perturbation", {"U", "W"}},
      {"multiplier_properties", {"U", "Y", "X"}},
      {"lower_frame", {"U", "Y", "X"}},
      {"sequence_perturbation", {"X", "Y", "U"}},
      {"frame_image", {"Y", "W", "U"}},
      {"dual_multiplier", {"X", "Xd", "U"}},
      {"near_dual", {"Y", "X", "U?"}},
      {"riesz_injectivity", {"X", "Y", "U1", "U2"}},
      {"riesz_norm_bounds", {"X", "Y", "U"}},
      {"riesz_invertibility", {"X", "Y", "U"}},
      {"unique_dual", {"Y", "X", "U"}},
      {"reconstruction", {"X"}},
      {"frame_bounds", {"X"}},
  };
  return args;
}

// Which object kind each argument name expects.
inline bool argument_wants_sequence(const std::string& name) {
  return name == "X" || name == "Y" || name == "Xd";
}

namespace detail {

inline const json& require_field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw parse_error(path, "expected an object");
  if (!obj.contains(key)) throw parse_error(path + "/" + key, "missing field '" + key + "'");
  return obj.at(key);
}

inline int get_int(const json& j, const std::string& path, int lo = 1, int hi = 64) {
  if (!j.is_number_integer()) throw parse_error(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi) throw parse_error(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

inline double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw parse_error(path, "expected a number");
  return j.get<double>();
}

inline std::uint64_t get_seed(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw parse_error(path, "seed must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

inline int param_int(const json& params, const std::string& key, int fallback, const std::string& path, int lo = 1,
                     int hi = 64) {
  if (!params.contains(key)) return fallback;
  return get_int(params.at(key), path + "/" + key, lo, hi);
}

inline double param_double(const json& params, const std::string& key, double fallback, const std::string& path) {
  if (!params.contains(key)) return fallback;
  return get_double(params.at(key), path + "/" + key);
}

}  // namespace detail

inline const Object& lookup(const Scenario& s, const std::string& id, const std::string& path) {
  auto it = s.objects.find(id);
  if (it == s.objects.end()) throw parse_error(path, "unresolved reference '" + id + "'");
  return it->second;
}

inline const FrameSequence& lookup_sequence(const Scenario& s, const std::string& id, const std::string& path) {
  const auto& o = lookup(s, id, path);
  if (!std::holds_alternative<FrameSequence>(o)) {
    throw parse_error(path, "'" + id + "' is a " + kind_name(o) + ", expected a sequence");
  }
  return std::get<FrameSequence>(o);
}

// Operators and diagonal symbols both serve as operators.
inline ModuleOperator lookup_operator(const Scenario& s, const std::string& id, const std::string& path) {
  const auto& o = lookup(s, id, path);
  if (std::holds_alternative<ModuleOperator>(o)) return std::get<ModuleOperator>(o);
  if (std::holds_alternative<DiagonalSymbol>(o)) return diagonal_to_full(std::get<DiagonalSymbol>(o));
  throw parse_error(path, "'" + id + "' is a sequence, expected an operator");
}

// Generated objects, keyed by id suffix ("" for the main object).
inline std::vector<std::pair<std::string, Object>> generate_instance(const std::string& kind, std::uint64_t seed,
                                                                     const json& params, const Scenario& s,
                                                                     const std::string& path) {
  using namespace detail;
  if (!params.is_object()) throw parse_error(path + "/params", "expected an object");
  const auto ppath = path + "/params";
  const auto& tol = s.tolerances;
  CounterRng rng(seed);
  const int k = param_int(params, "rank", s.rank, ppath);
  std::vector<std::pair<std::string, Object>> out;

  if (kind == "random_frame") {
    const int n = param_int(params, "N", k + 1, ppath);
    if (n < k) throw parse_error(ppath + "/N", "a frame of A^" + std::to_string(k) + " needs N >= " + std::to_string(k));
    const double ratio = param_double(params, "min_ratio", 0.02, ppath);
    if (!(ratio > 0.0 && ratio < 1.0)) throw parse_error(ppath + "/min_ratio", "must lie in (0, 1)");
    auto x = gen::random_frame(s.shape, k, n, rng, ratio, tol);
    out.emplace_back("", x);
  } else if (kind == "riesz_basis") {
    const int n = param_int(params, "N", k, ppath);
    if (n != k) throw parse_error(ppath + "/N", "a modular Riesz basis of A^" + std::to_string(k) + " has N = " + std::to_string(k));
    auto x = gen::random_riesz_basis(s.shape, k, rng, tol);
    if (!is_modular_riesz(x, tol).is_riesz) throw structure_error("riesz_basis: post-check failed");
    out.emplace_back("", x);
  } else if (kind == "dual_pair") {
    const double rho = param_double(params, "rho", 0.3, ppath);
    if (rho < 0.0) throw parse_error(ppath + "/rho", "must be non-negative");
    std::optional<FrameSequence> x;
    if (params.contains("frame")) {
      if (!params.at("frame").is_string()) throw parse_error(ppath + "/frame", "expected an object id");
      x = lookup_sequence(s, params.at("frame").get<std::string>(), ppath + "/frame");
    } else {
      const int n = param_int(params, "N", k + 1, ppath);
      if (n < k) throw parse_error(ppath + "/N", "a frame of A^" + std::to_string(k) + " needs N >= " + std::to_string(k));
      x = gen::random_frame(s.shape, k, n, rng, 0.02, tol);
    }
    if (!x->is_frame()) throw parse_error(ppath + "/frame", "referenced sequence is not a frame");
    auto pair = gen::alternative_dual(*x, rho, rng, tol);
    out.emplace_back("", pair.frame);
    out.emplace_back(".dual", pair.dual);
  } else if (kind == "near_identity_symbol") {
    const int n = param_int(params, "N", k, ppath);
    const double target = param_double(params, "target", 0.1, ppath);
    if (!(target >= 0.0)) throw parse_error(ppath + "/target", "must be non-negative");
    auto u = gen::near_identity_symbol(s.shape, n, target, rng);
    const double dev = op_norm(u - ModuleOperator::identity(s.shape, n));
    if (std::abs(dev - target) > 0.01 * target + 1e-15) throw structure_error("near_identity_symbol: post-check failed");
    out.emplace_back("", u);
  } else if (kind == "perturbed_sequence") {
    if (!params.contains("base") || !params.at("base").is_string()) throw parse_error(ppath + "/base", "expected an object id");
    const auto& base = lookup_sequence(s, params.at("base").get<std::string>(), ppath + "/base");
    const double target = param_double(params, "target", 0.0, ppath);
    if (!(target >= 0.0)) throw parse_error(ppath + "/target", "must be non-negative");
    const std::string measure = params.value("measure", std::string("difference_bound"));
    const std::string around = params.value("around", std::string("base"));
    if (around != "base" && around != "canonical_dual") throw parse_error(ppath + "/around", "expected \"base\" or \"canonical_dual\"");
    const FrameSequence centre = around == "base" ? base : canonical_dual(base, tol);
    if (measure == "difference_bound") out.emplace_back("", gen::perturb_difference_bound(centre, target, rng, tol));
    else if (measure == "sum_squares") out.emplace_back("", gen::perturb_sum_squares(centre, target, rng, tol));
    else throw parse_error(ppath + "/measure", "expected \"difference_bound\" or \"sum_squares\"");
  } else if (kind == "central_diagonal_symbol") {
    const int n = param_int(params, "N", k, ppath);
    out.emplace_back("", gen::central_diagonal_symbol(s.shape, n, rng));
  } else {
    throw parse_error(path + "/kind", "unknown generator kind '" + kind + "'");
  }
  return out;
}

inline Object literal_object(const json& o, const Scenario& s, const std::string& path) {
  using namespace detail;
  const auto& type_j = require_field(o, "type", path);
  if (!type_j.is_string()) throw parse_error(path + "/type", "expected a string");
  const auto type = type_j.get<std::string>();
  const int rank = o.contains("rank") ? get_int(o.at("rank"), path + "/rank") : s.rank;
  if (type == "frame" || type == "sequence") {
    auto x = io::sequence_from_json(require_field(o, "vectors", path), s.shape, rank, path + "/vectors", s.tolerances);
    if (type == "frame" && !x.is_frame()) throw parse_error(path, "declared frame is not a frame");
    return x;
  }
  if (type == "operator") return io::operator_from_json(require_field(o, "entries", path), s.shape, path + "/entries");
  if (type == "diagonal_symbol") {
    return io::diagonal_from_json(require_field(o, "entries", path), s.shape, path + "/entries", s.tolerances);
  }
  if (type == "standard_basis") {
    const int n = get_int(require_field(o, "size", path), path + "/size");
    return FrameSequence(s.shape, n, standard_basis(s.shape, n), s.tolerances);
  }
  if (type == "identity") return ModuleOperator::identity(s.shape, get_int(require_field(o, "size", path), path + "/size"));
  throw parse_error(path + "/type", "unknown object type '" + type + "'");
}

inline void add_object(Scenario& s, const std::string& id, Object o, const std::string& path) {
  if (s.objects.count(id)) throw parse_error(path, "duplicate object id '" + id + "'");
  s.objects.emplace(id, std::move(o));
  s.order.push_back(id);
}

inline Scenario from_json(const json& j, const Tolerances& base = tolerances_from_env()) {
  using namespace detail;
  if (!j.is_object()) throw parse_error("", "scenario must be a JSON object");
  Scenario s;
  s.tolerances = base;
  const auto& shape_j = require_field(j, "shape", "");
  if (!shape_j.is_array() || shape_j.empty()) throw parse_error("/shape", "expected a non-empty array of block sizes");
  std::vector<int> dims;
  for (std::size_t i = 0; i < shape_j.size(); ++i) dims.push_back(get_int(shape_j[i], "/shape/" + std::to_string(i), 1, 16));
  s.shape = AlgebraShape(dims);
  s.rank = get_int(require_field(j, "rank", ""), "/rank");
  if (j.contains("seed")) s.seed = get_seed(j.at("seed"), "/seed");
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (!t.is_object()) throw parse_error("/tolerances", "expected an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      try {
        s.tolerances.set(it.key(), get_double(it.value(), "/tolerances/" + it.key()));
      } catch (const parse_error&) {
        throw;
      } catch (const std::exception& e) {
        throw parse_error("/tolerances/" + it.key(), e.what());
      }
    }
  }

  if (j.contains("objects")) {
    const auto& objs = j.at("objects");
    if (!objs.is_array()) throw parse_error("/objects", "expected an array");
    for (std::size_t i = 0; i < objs.size(); ++i) {
      const auto path = "/objects/" + std::to_string(i);
      const auto& o = objs[i];
      const auto& id_j = require_field(o, "id", path);
      if (!id_j.is_string() || id_j.get<std::string>().empty()) throw parse_error(path + "/id", "expected a non-empty string");
      const auto id = id_j.get<std::string>();
      try {
        if (o.contains("generate")) {
          const auto& g = o.at("generate");
          const auto gpath = path + "/generate";
          const auto& kind = require_field(g, "kind", gpath);
          if (!kind.is_string()) throw parse_error(gpath + "/kind", "expected a string");
          const auto seed = get_seed(require_field(g, "seed", gpath), gpath + "/seed");
          const json params = g.contains("params") ? g.at("params") : json::object();
          for (auto& [suffix, obj] : generate_instance(kind.get<std::string>(), seed, params, s, gpath)) {
            add_object(s, id + suffix, std::move(obj), path);
          }
        } else {
          add_object(s, id, literal_object(o, s, path), path);
        }
      } catch (const parse_error&) {
        throw;
      } catch (const std::exception& e) {
        throw parse_error(path, e.what());
      }
    }
  }

  const auto& checks = require_field(j, "checks", "");
  if (!checks.is_array()) throw parse_error("/checks", "expected an array");
  const auto& known = theorem_arguments();
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto path = "/checks/" + std::to_string(i);
    const auto& c = checks[i];
    Check chk;
    chk.path = path;
    const auto& th = require_field(c, "theorem", path);
    if (!th.is_string()) throw parse_error(path + "/theorem", "expected a string");
    chk.theorem = th.get<std::string>();
    if (c.contains("seed")) chk.seed = get_seed(c.at("seed"), path + "/seed");
    if (c.contains("trials")) chk.trials = get_int(c.at("trials"), path + "/trials", 1, 100000);
    if (c.contains("args")) {
      if (chk.trials) throw parse_error(path, "a check has either args or trials, not both");
      auto it = known.find(chk.theorem);
      if (it == known.end()) throw parse_error(path + "/theorem", "unknown theorem '" + chk.theorem + "'");
      const auto& a = c.at("args");
      if (!a.is_object()) throw parse_error(path + "/args", "expected an object");
      for (auto ai = a.begin(); ai != a.end(); ++ai) {
        if (!ai.value().is_string()) throw parse_error(path + "/args/" + ai.key(), "expected an object id");
        chk.args[ai.key()] = ai.value().get<std::string>();
      }
      for (const auto& name : it->second) {
        const bool optional = name.back() == '?';
        const auto key = optional ? name.substr(0, name.size() - 1) : name;
        if (!chk.args.count(key)) {
          if (optional) continue;
          throw parse_error(path + "/args", "missing argument '" + key + "'");
        }
        const auto apath = path + "/args/" + key;
        if (argument_wants_sequence(key)) lookup_sequence(s, chk.args[key], apath);
        else lookup_operator(s, chk.args[key], apath);
      }
      for (const auto& [key, _] : chk.args) {
        bool ok = false;
        for (const auto& name : it->second) ok = ok || name == key || name == key + "?";
        if (!ok) throw parse_error(path + "/args/" + key, "unexpected argument for " + chk.theorem);
      }
    } else {
      bool family = false;
      for (const auto& f : default_families()) family = family || f.name == chk.theorem;
      if (!family) throw parse_error(path + "/theorem", "unknown theorem family '" + chk.theorem + "'");
      if (!chk.trials) chk.trials = find_family(default_families(), chk.theorem).default_trials;
    }
    s.checks.push_back(std::move(chk));
  }
  return s;
}

// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw parse_error(source + ":" + std::to_string(line) + ":" + std::to_string(col), "invalid JSON");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Scenario load(const std::string& path, const Tolerances& base = tolerances_from_env()) {
  auto text = read_file(path);
  auto j = parse_text(text, path);
  try {
    return from_json(j, base);
  } catch (const parse_error& e) {
    throw parse_error(path + ":" + e.path, std::string(e.what()).substr(e.path.size() + 2));
  }
}

inline Certificate run_check(const Scenario& s, const Check& c, std::uint64_t seed) {
  const auto& tol = s.tolerances;
  auto seq = [&](const std::string& k) { return lookup_sequence(s, c.args.at(k), c.path + "/args/" + k); };
  auto op = [&](const std::string& k) { return lookup_operator(s, c.args.at(k), c.path + "/args/" + k); };
  const auto& t = c.theorem;
  if (t == "perturbation") return certify_perturbation(op("U"), op("W"), seed, tol);
  if (t == "multiplier_properties") return certify_multiplier_properties(op("U"), seq("Y"), seq("X"), seed, tol);
  if (t == "lower_frame") return certify_lower_frame(op("U"), seq("Y"), seq("X"), seed, tol);
  if (t == "sequence_perturbation") return certify_sequence_perturbation(seq("X"), seq("Y"), op("U"), tol);
  if (t == "frame_image") return certify_frame_image(seq("Y"), op("W"), op("U"), tol);
  if (t == "dual_multiplier") return certify_dual_multiplier(seq("X"), seq("Xd"), op("U"), tol);
  if (t == "near_dual") {
    std::optional<ModuleOperator> u;
    if (c.args.count("U")) u = op("U");
    return certify_near_dual(seq("Y"), seq("X"), u, tol);
  }
  if (t == "riesz_injectivity") return certify_riesz_injectivity(seq("X"), seq("Y"), op("U1"), op("U2"), tol);
  if (t == "riesz_norm_bounds") return certify_riesz_norm_bounds(seq("X"), seq("Y"), op("U"), tol);
  if (t == "riesz_invertibility") return certify_riesz_invertibility(seq("X"), seq("Y"), op("U"), tol);
  if (t == "unique_dual") return certify_unique_dual(seq("Y"), seq("X"), op("U"), tol);
  if (t == "reconstruction") return certify_reconstruction(seq("X"), seed, tol);
  if (t == "frame_bounds") return certify_frame_bounds(seq("X"), tol);
  throw parse_error(c.path + "/theorem", "unknown theorem '" + t + "'");
}

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  unsigned threads = 0;
};

struct RunResult {
  json report;
  int violations = 0;
  int failures = 0;  // trial errors and unexpected family verdicts
};

// Executes every check. Instance errors inside a check (a precondition of
// the theorem failing on the given objects) are reported per check.
inline RunResult run(const Scenario& s, const RunOptions& opt = {}) {
  RunResult r;
  const auto seed = opt.seed.value_or(s.seed);
  json checks = json::array();
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    const auto& c = s.checks[i];
    json entry{{"index", static_cast<int>(i)}, {"theorem", c.theorem}};
    if (c.trials) {
      const int trials = opt.trials.value_or(*c.trials);
      const auto fam_seed = c.seed.value_or(seed);
      const auto families = default_families();
      const auto idx = family_index(c.theorem);
      auto fr = run_family(families[idx], idx, fam_seed, trials, s.tolerances, opt.threads);
      r.violations += fr.violations;
      r.failures += fr.unexpected - fr.violations + fr.errors;
      entry["seed"] = fam_seed;
      entry["family"] = io::family_to_json(fr);
    } else {
      json args = json::object();
      for (const auto& [k, v] : c.args) args[k] = v;
      entry["args"] = args;
      const auto check_seed = c.seed.value_or(seed);
      try {
        auto cert = run_check(s, c, check_seed);
        if (cert.verdict() == Verdict::violation) ++r.violations;
        entry["certificate"] = io::certificate_to_json(cert);
      } catch (const parse_error&) {
        throw;
      } catch (const std::exception& e) {
        ++r.failures;
        entry["error"] = e.what();
      }
    }
    checks.push_back(entry);
  }
  int verified = 0, not_met = 0, violations = 0, errors = 0;
  for (const auto& e : checks) {
    if (e.contains("certificate")) {
      const auto v = e["certificate"]["verdict"].get<std::string>();
      verified += v == "verified";
      not_met += v == "hypothesis_not_met";
      violations += v == "VIOLATION";
    } else if (e.contains("family")) {
      const auto& cnt = e["family"]["counts"];
      verified += cnt["verified"].get<int>();
      not_met += cnt["hypothesis_not_met"].get<int>();
      violations += cnt["VIOLATION"].get<int>();
      errors += e["family"]["errors"].get<int>();
    } else {
      ++errors;
    }
  }
  json objects = json::array();
  for (const auto& id : s.order) objects.push_back({{"id", id}, {"kind", kind_name(s.objects.at(id))}});
  r.report = {{"kind", "scenario"},
              {"environment", io::environment_stamp(s.tolerances, seed)},
              {"shape", s.shape.dims()},
              {"rank", s.rank},
              {"objects", objects},
              {"summary",
               {{"verified", verified}, {"hypothesis_not_met", not_met}, {"VIOLATION", violations}, {"errors", errors}}},
              {"checks", checks}};
  return r;
}

// JSON fixture for the objects produced by one generator call.
inline json fixture_json(const std::vector<std::pair<std::string, Object>>& objs, const std::string& id,
                         const Scenario& s) {
  json out = json::array();
  for (const auto& [suffix, o] : objs) {
    json e{{"id", id + suffix}};
    if (std::holds_alternative<FrameSequence>(o)) {
      const auto& x = std::get<FrameSequence>(o);
      e["type"] = x.is_frame() ? "frame" : "sequence";
      if (x.rank() != s.rank) e["rank"] = x.rank();
      e["vectors"] = io::sequence_to_json(x);
    } else if (std::holds_alternative<ModuleOperator>(o)) {
      e["type"] = "operator";
      e["entries"] = io::operator_to_json(std::get<ModuleOperator>(o));
    } else {
      e["type"] = "diagonal_symbol";
      e["entries"] = io::diagonal_to_json(std::get<DiagonalSymbol>(o));
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace cstar::scenario
