#include <gtest/gtest.h>

#include "cstar/serialize.hpp"

using namespace cstar;
using io::json;

namespace {

AlgebraShape shape21() { return AlgebraShape({2, 1}); }

}  // namespace

TEST(Serialize, MatrixRoundTrip) {
  CMatrix m(2, 3);
  m << cplx(1, 2), cplx(-0.5, 0), cplx(0, 1e-300), cplx(3, 0), cplx(1.0 / 3.0, -2), cplx(0, 0);
  auto back = io::matrix_from_json(io::matrix_to_json(m), "");
  EXPECT_EQ(back, m);
  CMatrix r = CMatrix::Constant(2, 2, 1.5);
  EXPECT_FALSE(io::matrix_to_json(r).contains("im"));
  EXPECT_EQ(io::matrix_from_json(json(2.5), "")(0, 0), cplx(2.5, 0));
}

TEST(Serialize, MalformedMatrix) {
  try {
    io::matrix_from_json(json::parse(R"({"re": [[1, 2], [3]]})"), "/x");
    FAIL();
  } catch (const io::parse_error& e) {
    EXPECT_EQ(e.path, "/x/re/1");
  }
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"re": [[1, "a"]]})"), ""), io::parse_error);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"re": [[1]], "im": [[1, 2]]})"), ""), io::parse_error);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"([1, 2])"), ""), io::parse_error);
}

TEST(Serialize, ModuleObjectsRoundTrip) {
  auto rng = CounterRng::stream(11, {1});
  auto s = shape21();
  auto x = gen::random_frame(s, 2, 3, rng);
  auto back = io::sequence_from_json(io::sequence_to_json(x), s, 2, "");
  EXPECT_TRUE(same_sequence(x, back));

  auto t = gen::random_operator(s, 2, 3, rng);
  auto tb = io::operator_from_json(io::operator_to_json(t), s, "");
  EXPECT_EQ(tb.domain_rank(), 2);
  EXPECT_EQ(op_norm(t - tb), 0.0);

  auto d = gen::central_diagonal_symbol(s, 3, rng);
  auto db = io::diagonal_from_json(io::diagonal_to_json(d), s, "");
  EXPECT_EQ(op_norm(diagonal_to_full(d) - diagonal_to_full(db)), 0.0);
}

TEST(Serialize, ShapeMismatchReportsPath) {
  auto e = io::element_to_json(AlgebraElement::identity(shape21()));
  try {
    io::element_from_json(e, AlgebraShape({2, 2}), "/objects/0");
    FAIL();
  } catch (const io::parse_error& err) {
    EXPECT_EQ(err.path.rfind("/objects/0", 0), 0u);
  }
}

TEST(Serialize, NonFiniteNumbersStayValidJson) {
  EXPECT_EQ(io::number(1.5), json(1.5));
  EXPECT_EQ(io::number(std::numeric_limits<double>::infinity()), json("inf"));
  EXPECT_EQ(io::number(-std::numeric_limits<double>::infinity()), json("-inf"));
  EXPECT_EQ(io::number(std::nan("")), json("nan"));
  Certificate c("t", 1, {});
  c.check_le("nan", std::nan(""), 1.0);
  auto j = io::certificate_to_json(c);
  EXPECT_EQ(j["verdict"], "VIOLATION");
  EXPECT_NO_THROW(json::parse(j.dump()));
}

TEST(Serialize, CertificateFields) {
  Certificate c("perturbation", 9, {});
  c.constants["lambda"] = 0.25;
  c.require_less("h", 0.25, 0.5);
  c.check_le("k", 1.0, 2.0);
  c.check_le("info", 3.0, 2.0, false);
  auto j = io::certificate_to_json(c);
  EXPECT_EQ(j["theorem"], "perturbation");
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["verdict"], "verified");
  EXPECT_EQ(j["constants"]["lambda"], 0.25);
  ASSERT_EQ(j["hypotheses"].size(), 1u);
  EXPECT_EQ(j["hypotheses"][0]["met"], true);
  ASSERT_EQ(j["conclusions"].size(), 2u);
  EXPECT_EQ(j["conclusions"][1]["binding"], false);
  EXPECT_EQ(j["conclusions"][1]["pass"], false);
}

TEST(Serialize, EnvironmentStampEchoesTolerances) {
  Tolerances tol;
  tol.check = 1e-7;
  auto j = io::environment_stamp(tol, 42);
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["tolerances"]["check"], 1e-7);
  EXPECT_EQ(j["tolerances"]["jacobi"], 1e-13);
}

TEST(Tolerances, Overrides) {
  auto t = parse_tolerance_overrides("check=1e-6, margin=1e-10");
  EXPECT_EQ(t.check, 1e-6);
  EXPECT_EQ(t.margin, 1e-10);
  EXPECT_EQ(t.positivity, 1e-9);
  EXPECT_THROW(parse_tolerance_overrides("bogus=1e-3"), std::invalid_argument);
  EXPECT_THROW(parse_tolerance_overrides("check=0"), std::invalid_argument);
  EXPECT_THROW(parse_tolerance_overrides("check=1e-20"), std::invalid_argument);
  EXPECT_THROW(parse_tolerance_overrides("check=2"), std::invalid_argument);
  EXPECT_THROW(parse_tolerance_overrides("check"), std::invalid_argument);
  EXPECT_THROW(parse_tolerance_overrides("check=abc"), std::invalid_argument);
}
