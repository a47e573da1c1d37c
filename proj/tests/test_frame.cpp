#include <gtest/gtest.h>

#include "cstar/crosscheck.hpp"
#include "oracle.hpp"

using namespace cstar;

namespace {

const std::vector<AlgebraShape> kShapes = {AlgebraShape({1}), AlgebraShape({2}), AlgebraShape({2, 1}),
                                           AlgebraShape({1, 1}), AlgebraShape({3})};

}  // namespace

TEST(FrameOperator, MatchesDirectSumOracle) {
  auto rng = CounterRng::stream(9, {1});
  for (const auto& s : kShapes) {
    for (int k = 1; k <= 3; ++k) {
      auto x = gen::random_frame(s, k, k + 2, rng);
      CMatrix ref = oracle::frame_operator(x);
      EXPECT_LE((complex_realization(x.frame_operator()) - ref).norm(), 1e-12 * ref.norm());
      auto [c, d] = oracle::frame_bounds(x);
      EXPECT_NEAR(x.bounds().lower, c, 1e-12 * d);
      EXPECT_NEAR(x.bounds().upper, d, 1e-12 * d);
      EXPECT_TRUE(x.is_frame());
    }
  }
}

// C <x, x> <= sum_n <x, x_n><x_n, x> <= D <x, x> in the order of A.
TEST(FrameOperator, FrameInequalityInAlgebraOrder) {
  auto rng = CounterRng::stream(9, {2});
  for (const auto& s : kShapes) {
    auto x = gen::random_frame(s, 2, 4, rng);
    const double c = x.bounds().lower, d = x.bounds().upper;
    for (int rep = 0; rep < 30; ++rep) {
      auto v = gen::random_vector(s, 2, rng);
      auto sum = AlgebraElement::zero(s);
      for (const auto& xn : x.vectors()) sum += inner_product(v, xn) * inner_product(xn, v);
      auto xx = inner_product(v, v);
      EXPECT_TRUE(leq(c * xx, sum));
      EXPECT_TRUE(leq(sum, d * xx));
    }
  }
}

TEST(Frame, OrthonormalBasis) {
  for (const auto& s : kShapes) {
    FrameSequence e(standard_basis(s, 3));
    EXPECT_DOUBLE_EQ(e.bounds().lower, 1.0);
    EXPECT_DOUBLE_EQ(e.bounds().upper, 1.0);
    EXPECT_EQ(op_norm(e.frame_operator() - ModuleOperator::identity(s, 3)), 0.0);
    EXPECT_TRUE(is_modular_riesz(e).is_riesz);
    EXPECT_TRUE(has_unique_dual(e));
    EXPECT_TRUE(same_sequence(canonical_dual(e), e, 1e-15));
    EXPECT_EQ(biorthogonality_residual(e, e), 0.0);
  }
}

TEST(Frame, MercedesBenzIsTight) {
  auto mb = mercedes_benz_frame();
  EXPECT_NEAR(mb.bounds().lower, 1.5, 1e-12);
  EXPECT_NEAR(mb.bounds().upper, 1.5, 1e-12);
  EXPECT_FALSE(has_unique_dual(mb));
  EXPECT_FALSE(is_modular_riesz(mb).is_riesz);
}

TEST(Frame, NotAFrame) {
  AlgebraShape s({2});
  auto e = standard_basis(s, 2);
  FrameSequence x(s, 2, {e[0], e[0]});
  EXPECT_FALSE(x.is_frame());
  EXPECT_EQ(x.bounds().lower, 0.0);
  EXPECT_THROW(canonical_dual(x), structure_error);
  // In M_2 a single rank-one coordinate does not generate.
  CMatrix rank_one = CMatrix::Zero(2, 2);
  rank_one(0, 0) = 1.0;
  ModuleVector v(s, 1, {rank_one});
  EXPECT_FALSE(FrameSequence(s, 1, {v}).is_frame());
  EXPECT_THROW(FrameSequence(s, 1, {}), shape_error);
}

TEST(Frame, CanonicalDualReconstructs) {
  auto rng = CounterRng::stream(9, {4});
  for (const auto& s : kShapes) {
    auto x = gen::random_frame(s, 2, 5, rng);
    auto v = gen::random_vector(s, 2, rng);
    auto r = reconstruct(x, v);
    EXPECT_LE(r.residual, 1e-10 * norm(v));
    auto dual = canonical_dual(x);
    EXPECT_TRUE(is_dual_pair(x, dual));
    EXPECT_TRUE(is_dual_pair(dual, x));
    EXPECT_NEAR(dual.bounds().lower, 1.0 / x.bounds().upper, 1e-10 / x.bounds().upper);
    EXPECT_NEAR(dual.bounds().upper, 1.0 / x.bounds().lower, 1e-10 / x.bounds().lower);
  }
}

TEST(Frame, AlternativeDualIsNotCanonical) {
  auto rng = CounterRng::stream(9, {5});
  for (const auto& s : kShapes) {
    auto x = gen::random_frame(s, 2, 5, rng);
    auto pair = gen::alternative_dual(x, 0.4, rng);
    EXPECT_LE(dual_pair_residual(x, pair.dual), 1e-10);
    EXPECT_FALSE(same_sequence(pair.dual, canonical_dual(x), 1e-6));
    // For N = k there is only one dual.
    auto r = gen::random_riesz_basis(s, 2, rng);
    auto only = gen::alternative_dual(r, 0.4, rng);
    EXPECT_TRUE(same_sequence(only.dual, canonical_dual(r), 1e-10));
  }
}

TEST(Frame, RieszBasesAndUniqueDuals) {
  auto rng = CounterRng::stream(9, {6});
  for (const auto& s : kShapes) {
    auto r = gen::random_riesz_basis(s, 3, rng);
    EXPECT_TRUE(is_modular_riesz(r).is_riesz);
    EXPECT_TRUE(has_unique_dual(r));
    EXPECT_LE(biorthogonality_residual(r, canonical_dual(r)), 1e-10);
    auto over = gen::random_frame(s, 2, 4, rng);
    EXPECT_FALSE(is_modular_riesz(over).is_riesz);
    EXPECT_FALSE(has_unique_dual(over));
  }
  EXPECT_THROW(riesz_from_operator(ModuleOperator::zero(AlgebraShape({1}), 2, 3)), structure_error);
  EXPECT_THROW(riesz_from_operator(ModuleOperator::zero(AlgebraShape({1}), 2, 2)), singular_error);
}

TEST(Frame, ImageUnderInvertibleOperator) {
  auto rng = CounterRng::stream(9, {7});
  AlgebraShape s({2, 1});
  auto y = gen::random_frame(s, 2, 4, rng);
  auto w = gen::random_invertible(s, 2, rng);
  auto x = image(w, y);
  EXPECT_TRUE(x.is_frame());
  // S_X = W S_Y W^*
  EXPECT_LE(op_norm(x.frame_operator() - compose(w, compose(y.frame_operator(), adjoint(w)))), 1e-10);
}

TEST(Frame, AnalysisAndSynthesis) {
  auto rng = CounterRng::stream(9, {8});
  AlgebraShape s({2});
  auto x = gen::random_frame(s, 2, 3, rng);
  auto v = gen::random_vector(s, 2, rng);
  auto c = analysis(x, v);
  for (int n = 0; n < 3; ++n) EXPECT_LE(distance(c.coord(n), inner_product(v, x[n])), 1e-13);
  auto a = gen::random_vector(s, 3, rng);
  auto sum = ModuleVector::zero(s, 2);
  for (int n = 0; n < 3; ++n) sum += a.coord(n) * x[n];
  EXPECT_LE(distance(synthesis(x, a), sum), 1e-12);
  EXPECT_THROW(synthesis(x, v), shape_error);
}
