#include <gtest/gtest.h>

#include "cstar/scenario.hpp"

using namespace cstar;
using scenario::json;
using scenario::parse_error;

namespace {

json onb_scenario() {
  return json::parse(R"({
    "shape": [1], "rank": 2, "seed": 5,
    "objects": [
      {"id": "E", "type": "standard_basis", "size": 2},
      {"id": "U", "type": "operator", "entries": [[[2], [0]], [[0], [3]]]}
    ],
    "checks": [{"theorem": "riesz_invertibility", "args": {"X": "E", "Y": "E", "U": "U"}}]
  })");
}

std::string error_path(const json& j) {
  try {
    scenario::from_json(j, {});
  } catch (const parse_error& e) {
    return e.path;
  }
  return "<no error>";
}

json with_objects(json objects, json checks = json::array()) {
  return {{"shape", {2, 1}}, {"rank", 2}, {"objects", objects}, {"checks", checks}};
}

json generated(const std::string& id, const std::string& kind, std::uint64_t seed, json params) {
  return {{"id", id}, {"generate", {{"kind", kind}, {"seed", seed}, {"params", params}}}};
}

}  // namespace

TEST(Scenario, OrthonormalRieszInvertibility) {
  auto s = scenario::from_json(onb_scenario(), {});
  auto r = scenario::run(s);
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.failures, 0);
  const auto& cert = r.report["checks"][0]["certificate"];
  EXPECT_EQ(cert["verdict"], "verified");
  EXPECT_EQ(r.report["summary"]["verified"], 1);
  EXPECT_EQ(r.report["environment"]["seed"], 5);
}

TEST(Scenario, UndefinedReferenceNamesThePath) {
  auto j = onb_scenario();
  j["checks"][0]["args"]["U"] = "missing";
  EXPECT_EQ(error_path(j), "/checks/0/args/U");
}

TEST(Scenario, ReferenceOfWrongKind) {
  auto j = onb_scenario();
  j["checks"][0]["args"]["X"] = "U";
  EXPECT_EQ(error_path(j), "/checks/0/args/X");
}

TEST(Scenario, StructuralErrors) {
  auto j = onb_scenario();
  j["checks"][0]["theorem"] = "nonexistent";
  EXPECT_EQ(error_path(j), "/checks/0/theorem");
  j = onb_scenario();
  j["checks"][0]["args"].erase("U");
  EXPECT_EQ(error_path(j), "/checks/0/args");
  j = onb_scenario();
  j["checks"][0]["args"]["Z"] = "E";
  EXPECT_EQ(error_path(j), "/checks/0/args/Z");
  j = onb_scenario();
  j["objects"][1]["id"] = "E";
  EXPECT_EQ(error_path(j), "/objects/1");
  j = onb_scenario();
  j["objects"][1]["entries"][0][0] = json::array({1, 2});
  EXPECT_EQ(error_path(j).rfind("/objects/1/entries/0/0", 0), 0u);
  j = onb_scenario();
  j["shape"] = json::array();
  EXPECT_EQ(error_path(j), "/shape");
  j = onb_scenario();
  j.erase("checks");
  EXPECT_EQ(error_path(j), "/checks");
  j = onb_scenario();
  j["checks"][0]["trials"] = 3;
  EXPECT_EQ(error_path(j), "/checks/0");
}

TEST(Scenario, MalformedJsonReportsLineAndColumn) {
  try {
    scenario::parse_text("{\n  \"shape\": [1],\n  \"rank\": ,\n}", "f.json");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.path, "f.json:3:11");
  }
}

TEST(Scenario, ToleranceOverrides) {
  auto j = onb_scenario();
  j["tolerances"] = {{"check", 1e-7}};
  auto s = scenario::from_json(j, {});
  EXPECT_EQ(s.tolerances.check, 1e-7);
  EXPECT_EQ(scenario::run(s).report["environment"]["tolerances"]["check"], 1e-7);
  j["tolerances"] = {{"check", 0.0}};
  EXPECT_EQ(error_path(j), "/tolerances/check");
  j["tolerances"] = {{"unknown", 1e-3}};
  EXPECT_EQ(error_path(j), "/tolerances/unknown");
  j["tolerances"] = {{"check", "small"}};
  EXPECT_EQ(error_path(j), "/tolerances/check");
}

TEST(Scenario, EveryGeneratorKind) {
  auto j = with_objects(json::array({
      generated("F", "random_frame", 1, {{"N", 4}}),
      generated("R", "riesz_basis", 2, json::object()),
      generated("P", "dual_pair", 3, {{"frame", "F"}, {"rho", 0.2}}),
      generated("U", "near_identity_symbol", 4, {{"N", 4}, {"target", 0.3}}),
      generated("Y", "perturbed_sequence", 5, {{"base", "F"}, {"target", 1e-3}}),
      generated("Z", "perturbed_sequence", 6, {{"base", "F"}, {"measure", "sum_squares"}, {"around", "canonical_dual"}, {"target", 1e-3}}),
      generated("m", "central_diagonal_symbol", 7, {{"N", 4}}),
  }));
  auto s = scenario::from_json(j, {});
  for (const char* id : {"F", "R", "P", "P.dual", "U", "Y", "Z", "m"}) EXPECT_TRUE(s.objects.count(id)) << id;
  const auto& f = std::get<FrameSequence>(s.objects.at("F"));
  EXPECT_EQ(f.size(), 4);
  EXPECT_TRUE(is_modular_riesz(std::get<FrameSequence>(s.objects.at("R"))).is_riesz);
  EXPECT_TRUE(is_dual_pair(std::get<FrameSequence>(s.objects.at("P")), std::get<FrameSequence>(s.objects.at("P.dual"))));
  const double dev = op_norm(std::get<ModuleOperator>(s.objects.at("U")) - ModuleOperator::identity(s.shape, 4));
  EXPECT_GE(dev, 0.297);
  EXPECT_LE(dev, 0.303);
  EXPECT_NEAR(difference(f, std::get<FrameSequence>(s.objects.at("Y"))).bounds().upper, 1e-3, 1e-12);
  auto dual = canonical_dual(f);
  const auto& z = std::get<FrameSequence>(s.objects.at("Z"));
  double sigma = 0.0;
  for (int n = 0; n < 4; ++n) sigma += std::pow(distance(z[n], dual[n]), 2);
  EXPECT_NEAR(sigma, 1e-3, 1e-12);
  for (const auto& a : std::get<DiagonalSymbol>(s.objects.at("m")).entries()) EXPECT_TRUE(in_center(a));
}

TEST(Scenario, GeneratorParameterErrors) {
  EXPECT_EQ(error_path(with_objects(json::array({generated("R", "riesz_basis", 1, {{"N", 3}})}))),
            "/objects/0/generate/params/N");
  EXPECT_EQ(error_path(with_objects(json::array({generated("F", "random_frame", 1, {{"N", 1}})}))),
            "/objects/0/generate/params/N");
  EXPECT_EQ(error_path(with_objects(json::array({generated("F", "mystery", 1, json::object())}))),
            "/objects/0/generate/kind");
  EXPECT_EQ(error_path(with_objects(json::array({generated("Y", "perturbed_sequence", 1, {{"base", "nope"}})}))),
            "/objects/0/generate/params/base");
}

TEST(Scenario, DualPairOfOrthonormalBasisIsItself) {
  auto j = json::parse(R"({
    "shape": [1], "rank": 3,
    "objects": [
      {"id": "E", "type": "standard_basis", "size": 3},
      {"id": "P", "generate": {"kind": "dual_pair", "seed": 1, "params": {"frame": "E", "rho": 0.7}}}
    ],
    "checks": []
  })");
  auto s = scenario::from_json(j, {});
  EXPECT_TRUE(same_sequence(std::get<FrameSequence>(s.objects.at("P.dual")),
                            std::get<FrameSequence>(s.objects.at("E")), 1e-14));
}

TEST(Scenario, FamilyTrialsAndDeterministicReport) {
  auto j = json::parse(R"({
    "shape": [1], "rank": 1, "seed": 3,
    "objects": [],
    "checks": [{"theorem": "riesz_norm_bounds", "trials": 10}, {"theorem": "frame_bounds", "trials": 5}]
  })");
  auto s = scenario::from_json(j, {});
  auto a = scenario::run(s), b = scenario::run(s);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(a.report["summary"]["verified"], 15);
  auto c = scenario::run(s, {std::uint64_t{4}, 2, 0});
  EXPECT_EQ(c.report["summary"]["verified"], 4);
  EXPECT_NE(c.report["checks"][0]["family"].dump(), a.report["checks"][0]["family"].dump());
}

TEST(Scenario, InstanceErrorsAreReportedPerCheck) {
  // X is not a Riesz basis: the injectivity check cannot be instantiated.
  auto j = json::parse(R"({
    "shape": [1], "rank": 1,
    "objects": [
      {"id": "X", "type": "frame", "vectors": [[[1]], [[1]]]},
      {"id": "U", "type": "identity", "size": 2}
    ],
    "checks": [{"theorem": "riesz_injectivity", "args": {"X": "X", "Y": "X", "U1": "U", "U2": "U"}},
               {"theorem": "frame_bounds", "args": {"X": "X"}}]
  })");
  auto r = scenario::run(scenario::from_json(j, {}));
  EXPECT_EQ(r.failures, 1);
  EXPECT_TRUE(r.report["checks"][0].contains("error"));
  EXPECT_EQ(r.report["checks"][1]["certificate"]["verdict"], "verified");
}

TEST(Scenario, FixtureRoundTrip) {
  json base = with_objects(json::array({generated("F", "random_frame", 9, {{"N", 3}})}));
  auto s = scenario::from_json(base, {});
  auto fx = scenario::fixture_json({{"", s.objects.at("F")}}, "F", s);
  auto s2 = scenario::from_json(with_objects(fx), {});
  EXPECT_TRUE(same_sequence(std::get<FrameSequence>(s.objects.at("F")), std::get<FrameSequence>(s2.objects.at("F"))));
}
