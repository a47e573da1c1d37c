#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "cstar/suite.hpp"

// JSON forms:
//   complex matrix   {"re": [[...]], "im": [[...]]}   ("im" optional on input)
//   algebra element  [block_0, block_1, ...]
//   module vector    [coord_0, ..., coord_{k-1}]        each an element
//   sequence         [vector_0, ...]
//   operator         [[c_00, c_01, ...], ...]           row j holds c_{j,i}
//   diagonal symbol  [m_0, m_1, ...]
namespace cstar::io {

using json = nlohmann::json;

// Thrown for malformed input; `path` is a JSON pointer-like field path.
class parse_error : public std::invalid_argument {
 public:
  parse_error(const std::string& path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path(path) {}
  std::string path;
};

inline json matrix_to_json(const CMatrix& m) {
  json re = json::array(), im = json::array();
  bool any_im = false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
      any_im = any_im || m(i, j).imag() != 0.0;
    }
    re.push_back(r);
    im.push_back(c);
  }
  json out{{"re", re}};
  if (any_im) out["im"] = im;
  return out;
}

inline std::vector<std::vector<double>> read_real_rows(const json& j, const std::string& path) {
  if (!j.is_array()) throw parse_error(path, "expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    const auto rp = path + "/" + std::to_string(i);
    if (!row.is_array()) throw parse_error(rp, "expected an array of numbers");
    std::vector<double> r;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c].is_number()) throw parse_error(rp + "/" + std::to_string(c), "expected a number");
      r.push_back(row[c].get<double>());
    }
    if (!rows.empty() && r.size() != rows.front().size()) throw parse_error(rp, "ragged matrix rows");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline CMatrix matrix_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return CMatrix::Constant(1, 1, cplx(j.get<double>(), 0.0));
  if (!j.is_object() || !j.contains("re")) throw parse_error(path, "expected {\"re\": [[...]], \"im\": [[...]]}");
  auto re = read_real_rows(j["re"], path + "/re");
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(re.front().size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  if (j.contains("im")) {
    auto im = read_real_rows(j["im"], path + "/im");
    if (static_cast<Eigen::Index>(im.size()) != rows || (rows > 0 && static_cast<Eigen::Index>(im.front().size()) != cols)) {
      throw parse_error(path + "/im", "shape differs from re");
    }
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        m(r, c).imag(im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  }
  return m;
}

inline json element_to_json(const AlgebraElement& a) {
  json out = json::array();
  for (const auto& b : a.blocks()) out.push_back(matrix_to_json(b));
  return out;
}

inline AlgebraElement element_from_json(const json& j, const AlgebraShape& shape, const std::string& path) {
  // A bare number or single matrix is accepted for one-block algebras.
  if (shape.num_blocks() == 1 && (j.is_number() || j.is_object())) {
    json wrapped = json::array({j});
    return element_from_json(wrapped, shape, path);
  }
  if (!j.is_array()) throw parse_error(path, "expected an array of blocks");
  if (j.size() != shape.num_blocks()) {
    throw parse_error(path, "expected " + std::to_string(shape.num_blocks()) + " blocks, got " + std::to_string(j.size()));
  }
  std::vector<CMatrix> blocks;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto m = matrix_from_json(j[i], path + "/" + std::to_string(i));
    const int d = shape.dim(i);
    if (m.rows() != d || m.cols() != d) {
      throw parse_error(path + "/" + std::to_string(i), "block must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    blocks.push_back(std::move(m));
  }
  return {shape, std::move(blocks)};
}

inline json vector_to_json(const ModuleVector& x) {
  json out = json::array();
  for (const auto& c : x.coords()) out.push_back(element_to_json(c));
  return out;
}

inline ModuleVector vector_from_json(const json& j, const AlgebraShape& shape, int rank, const std::string& path) {
  if (!j.is_array()) throw parse_error(path, "expected an array of " + std::to_string(rank) + " coordinates");
  if (static_cast<int>(j.size()) != rank) {
    throw parse_error(path, "expected " + std::to_string(rank) + " coordinates, got " + std::to_string(j.size()));
  }
  std::vector<AlgebraElement> coords;
  for (std::size_t i = 0; i < j.size(); ++i) coords.push_back(element_from_json(j[i], shape, path + "/" + std::to_string(i)));
  return ModuleVector::from_coords(shape, coords);
}

inline json sequence_to_json(const FrameSequence& s) {
  json out = json::array();
  for (const auto& v : s.vectors()) out.push_back(vector_to_json(v));
  return out;
}

inline FrameSequence sequence_from_json(const json& j, const AlgebraShape& shape, int rank, const std::string& path,
                                        const Tolerances& tol = {}) {
  if (!j.is_array() || j.empty()) throw parse_error(path, "expected a non-empty array of vectors");
  std::vector<ModuleVector> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(vector_from_json(j[i], shape, rank, path + "/" + std::to_string(i)));
  return {shape, rank, std::move(v), tol};
}

inline json operator_to_json(const ModuleOperator& t) {
  json out = json::array();
  for (int j = 0; j < t.codomain_rank(); ++j) {
    json row = json::array();
    for (int i = 0; i < t.domain_rank(); ++i) row.push_back(element_to_json(t.entry(j, i)));
    out.push_back(row);
  }
  return out;
}

inline ModuleOperator operator_from_json(const json& j, const AlgebraShape& shape, const std::string& path) {
  if (!j.is_array() || j.empty()) throw parse_error(path, "expected a non-empty 2-D array of elements");
  std::vector<std::vector<AlgebraElement>> entries;
  std::size_t width = 0;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto rp = path + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].empty()) throw parse_error(rp, "expected a row of elements");
    if (r == 0) width = j[r].size();
    if (j[r].size() != width) throw parse_error(rp, "ragged operator rows");
    std::vector<AlgebraElement> row;
    for (std::size_t c = 0; c < j[r].size(); ++c) row.push_back(element_from_json(j[r][c], shape, rp + "/" + std::to_string(c)));
    entries.push_back(std::move(row));
  }
  return ModuleOperator::from_entries(shape, static_cast<int>(width), entries);
}

inline json diagonal_to_json(const DiagonalSymbol& m) {
  json out = json::array();
  for (const auto& a : m.entries()) out.push_back(element_to_json(a));
  return out;
}

inline DiagonalSymbol diagonal_from_json(const json& j, const AlgebraShape& shape, const std::string& path,
                                         const Tolerances& tol = {}) {
  if (!j.is_array() || j.empty()) throw parse_error(path, "expected a non-empty array of central elements");
  std::vector<AlgebraElement> m;
  for (std::size_t i = 0; i < j.size(); ++i) m.push_back(element_from_json(j[i], shape, path + "/" + std::to_string(i)));
  try {
    return {shape, std::move(m), tol};
  } catch (const not_central_error& e) {
    throw parse_error(path + "/" + std::to_string(e.index), "entry is not in the center of A");
  }
}

// Non-finite values become strings so the report stays valid JSON.
inline json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline json tolerances_to_json(const Tolerances& tol) {
  json out = json::object();
  for (const auto& [k, v] : tol.as_map()) out[k] = v;
  return out;
}

inline json environment_stamp(const Tolerances& tol, std::uint64_t seed) {
  const char* env = std::getenv(kToleranceEnv);
  return {{"seed", seed},
          {"tolerances", tolerances_to_json(tol)},
          {"tolerance_env", {{"name", kToleranceEnv}, {"value", env ? json(env) : json(nullptr)}}}};
}

inline json certificate_to_json(const Certificate& c) {
  json hyps = json::array();
  for (const auto& h : c.hypotheses) {
    hyps.push_back({{"name", h.name},
                    {"value", number(h.value)},
                    {"bound", number(h.bound)},
                    {"relation", h.relation},
                    {"margin", number(h.margin)},
                    {"met", h.met},
                    {"near_boundary", h.near_boundary}});
  }
  json concl = json::array();
  for (const auto& k : c.conclusions) {
    concl.push_back({{"name", k.name},
                     {"value", number(k.value)},
                     {"limit", number(k.limit)},
                     {"relation", k.relation},
                     {"pass", k.pass},
                     {"binding", k.binding}});
  }
  json consts = json::object();
  for (const auto& [k, v] : c.constants) consts[k] = number(v);
  json out{{"theorem", c.theorem},
           {"seed", c.seed},
           {"verdict", to_string(c.verdict())},
           {"hypothesis_met", c.hypothesis_met()},
           {"constants", consts},
           {"hypotheses", hyps},
           {"conclusions", concl}};
  if (!c.notes.empty()) out["notes"] = c.notes;
  return out;
}

inline json trial_to_json(const TrialResult& t) {
  return {{"trial", t.trial},
          {"seed", t.seed},
          {"shape", t.shape},
          {"k", t.rank},
          {"N", t.size},
          {"certificate", certificate_to_json(t.certificate)}};
}

// Pass/fail tallies of the non-binding conclusions, with failing trials.
inline json informational_summary(const FamilyRun& f) {
  std::map<std::string, std::pair<int, std::vector<int>>> tally;
  for (const auto& t : f.trials) {
    for (const auto& c : t.certificate.conclusions) {
      if (c.binding) continue;
      auto& e = tally[c.name];
      if (c.pass) ++e.first;
      else e.second.push_back(t.trial);
    }
  }
  json out = json::object();
  for (const auto& [name, e] : tally) {
    const int total = e.first + static_cast<int>(e.second.size());
    out[name] = {{"pass", e.first},
                 {"fail", static_cast<int>(e.second.size())},
                 {"pass_rate", total == 0 ? 0.0 : static_cast<double>(e.first) / total},
                 {"failing_trials", e.second}};
  }
  return out;
}

inline json family_to_json(const FamilyRun& f, bool include_trials = true) {
  json counts = json::object();
  for (const auto& [k, v] : f.counts) counts[k] = v;
  json out{{"family", f.family},
           {"theorem", f.theorem},
           {"expected", to_string(f.expected)},
           {"trials_run", static_cast<int>(f.trials.size())},
           {"counts", counts},
           {"unexpected", f.unexpected},
           {"errors", f.errors},
           {"pass", f.pass()},
           {"informational", informational_summary(f)}};
  if (!f.error_messages.empty()) out["error_messages"] = f.error_messages;
  if (include_trials) {
    json trials = json::array();
    for (const auto& t : f.trials) trials.push_back(trial_to_json(t));
    out["results"] = trials;
  }
  return out;
}

inline json suite_to_json(const SuiteRun& s, bool include_trials = true) {
  json fams = json::array();
  json summary = json::object();
  int verified = 0, not_met = 0, violations = 0;
  for (const auto& f : s.families) {
    fams.push_back(family_to_json(f, include_trials));
    verified += f.counts.at("verified");
    not_met += f.counts.at("hypothesis_not_met");
    violations += f.counts.at("VIOLATION");
  }
  summary["verified"] = verified;
  summary["hypothesis_not_met"] = not_met;
  summary["VIOLATION"] = violations;
  summary["pass"] = s.pass();
  return {{"kind", "suite"},
          {"environment", environment_stamp(s.tolerances, s.seed)},
          {"summary", summary},
          {"families", fams}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cstar::io
