// cstar: scenario runner, seeded suite, scalar crosscheck and fixture generator.
//
//   cstar run <scenario.json> [--out report.json] [--seed S] [--trials T]
//   cstar suite [--seed S] [--out report.json] [--trials T] [--only name]...
//   cstar crosscheck [--seed S] [--out report.json]
//   cstar gen <kind> [key=value ...] --out fixture.json
//
// Exit status: 0 no VIOLATION, 1 VIOLATION (or failed check), 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cstar.hpp"

namespace {

using cstar::io::json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

void emit(const json& report, const std::string& out) {
  const auto text = cstar::io::dump(report);
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw cstar::io::parse_error(out, "cannot write report");
  f << text;
}

int cmd_run(const std::string& path, const std::string& out, const std::vector<std::uint64_t>& seed,
            const std::vector<int>& trials) {
  auto s = cstar::scenario::load(path);
  cstar::scenario::RunOptions opt;
  if (!seed.empty()) opt.seed = seed.front();
  if (!trials.empty()) opt.trials = trials.front();
  auto r = cstar::scenario::run(s, opt);
  emit(r.report, out);
  const auto& sum = r.report["summary"];
  std::cerr << "verified " << sum["verified"] << ", hypothesis_not_met " << sum["hypothesis_not_met"] << ", VIOLATION "
            << sum["VIOLATION"] << ", errors " << sum["errors"] << "\n";
  return (r.violations > 0 || r.failures > 0) ? kViolation : kOk;
}

int cmd_suite(std::uint64_t seed, const std::string& out, int trials, const std::vector<std::string>& only) {
  const auto tol = cstar::tolerances_from_env();
  for (const auto& name : only) cstar::family_index(name);
  auto run = cstar::run_suite(seed, tol, trials, only);
  emit(cstar::io::suite_to_json(run), out);
  for (const auto& f : run.families) {
    std::fprintf(stderr, "%-24s verified %4d  not_met %4d  VIOLATION %3d  errors %d  %s\n", f.family.c_str(),
                 f.counts.at("verified"), f.counts.at("hypothesis_not_met"), f.counts.at("VIOLATION"), f.errors,
                 f.pass() ? "ok" : "FAIL");
  }
  return run.pass() ? kOk : kViolation;
}

int cmd_crosscheck(std::uint64_t seed, const std::string& out) {
  auto r = cstar::scalar_crosscheck(seed);
  emit(cstar::io::crosscheck_to_json(r), out);
  std::fprintf(stderr, "crosscheck: %zu instances, max deviation %.3e, Mercedes-Benz (%.12f, %.12f) %s\n",
               r.instances.size(), r.max_dev(), r.mercedes_c, r.mercedes_d, r.pass() ? "ok" : "FAIL");
  return r.pass() ? kOk : kViolation;
}

// key=value pairs; shape=2,1 and rank=k set the algebra, seed= the generator seed,
// id= the object id, everything else goes to the generator params.
int cmd_gen(const std::string& kind, const std::vector<std::string>& kv, const std::string& out) {
  std::vector<int> shape{1};
  int rank = 1;
  std::uint64_t seed = 0;
  std::string id = "X";
  json params = json::object();
  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw cstar::io::parse_error(item, "expected key=value");
    const auto key = item.substr(0, eq);
    const auto val = item.substr(eq + 1);
    try {
      if (key == "shape") {
        shape.clear();
        std::stringstream ss(val);
        std::string d;
        while (std::getline(ss, d, ',')) shape.push_back(std::stoi(d));
      } else if (key == "rank") {
        rank = std::stoi(val);
      } else if (key == "seed") {
        seed = std::stoull(val);
      } else if (key == "id") {
        id = val;
      } else {
        params[key] = json::parse(val, nullptr, false).is_discarded() ? json(val) : json::parse(val);
      }
    } catch (const std::logic_error&) {
      throw cstar::io::parse_error(key, "malformed value '" + val + "'");
    }
  }
  json doc{{"shape", shape}, {"rank", rank}, {"seed", seed}, {"objects", json::array()}, {"checks", json::array()}};
  // perturbed_sequence needs a base frame; one is generated alongside.
  if (kind == "perturbed_sequence" && !params.contains("base")) {
    doc["objects"].push_back({{"id", "base"}, {"generate", {{"kind", "random_frame"}, {"seed", seed}, {"params", json::object()}}}});
    params["base"] = "base";
  }
  doc["objects"].push_back({{"id", id}, {"generate", {{"kind", kind}, {"seed", seed}, {"params", params}}}});
  auto s = cstar::scenario::from_json(doc);

  json objects = json::array();
  for (const auto& oid : s.order) {
    const auto& o = s.objects.at(oid);
    for (auto& e : cstar::scenario::fixture_json({{"", o}}, oid, s)) objects.push_back(e);
  }
  json fixture{{"shape", shape}, {"rank", rank}, {"seed", seed}, {"objects", objects}, {"checks", json::array()}};
  emit(fixture, out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frames and multipliers over finite-dimensional C*-algebras"};
  app.require_subcommand(1);

  std::string path, out, kind;
  std::vector<std::uint64_t> run_seed;
  std::vector<int> run_trials;
  std::uint64_t seed = 42;
  int trials = 0;
  std::vector<std::string> only, kv;

  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("scenario", path, "scenario JSON")->required();
  run->add_option("--out", out, "report path (default stdout)");
  run->add_option("--seed", run_seed, "override the scenario seed")->expected(1);
  run->add_option("--trials", run_trials, "override trial counts of family checks")->expected(1);

  auto* suite = app.add_subcommand("suite", "default seeded suite over all theorems");
  suite->add_option("--seed", seed, "suite seed");
  suite->add_option("--out", out, "report path (default stdout)");
  suite->add_option("--trials", trials, "trials per family (default: family default)");
  suite->add_option("--only", only, "restrict to the named families");

  auto* cross = app.add_subcommand("crosscheck", "A = C against direct Hilbert-space frame theory");
  cross->add_option("--seed", seed, "seed");
  cross->add_option("--out", out, "report path (default stdout)");

  auto* gen = app.add_subcommand("gen", "emit a fixture from a generator");
  gen->add_option("kind", kind, "generator kind")->required();
  gen->add_option("params", kv, "key=value parameters");
  gen->add_option("--out", out, "fixture path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*run) return cmd_run(path, out, run_seed, run_trials);
    if (*suite) return cmd_suite(seed, out, trials, only);
    if (*cross) return cmd_crosscheck(seed, out);
    if (*gen) return cmd_gen(kind, kv, out);
  } catch (const cstar::io::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
