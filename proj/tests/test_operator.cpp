#include <gtest/gtest.h>

#include "cstar/generators.hpp"
#include "oracle.hpp"

using namespace cstar;

namespace {

const std::vector<AlgebraShape> kShapes = {AlgebraShape({1}), AlgebraShape({2}), AlgebraShape({2, 1}),
                                           AlgebraShape({1, 1}), AlgebraShape({3})};

}  // namespace

// T(a x) = a T(x) and <T x, y> = <x, T^* y>.
TEST(ModuleOperator, LinearityAndAdjoint) {
  auto rng = CounterRng::stream(7, {1});
  for (const auto& s : kShapes) {
    auto t = gen::random_operator(s, 2, 3, rng);
    auto x = gen::random_vector(s, 2, rng), y = gen::random_vector(s, 3, rng);
    auto a = gen::random_element(s, rng);
    EXPECT_LE(distance(t.apply(a * x), a * t.apply(x)), 1e-12);
    EXPECT_LE(distance(inner_product(t.apply(x), y), inner_product(x, adjoint(t).apply(y))), 1e-12);
  }
}

TEST(ModuleOperator, EntriesActFromTheRight) {
  auto rng = CounterRng::stream(7, {2});
  AlgebraShape s({2});
  std::vector<std::vector<AlgebraElement>> e(2);
  for (auto& row : e)
    for (int i = 0; i < 3; ++i) row.push_back(gen::random_element(s, rng));
  auto t = ModuleOperator::from_entries(s, 3, e);
  auto x = gen::random_vector(s, 3, rng);
  auto tx = t.apply(x);
  for (int j = 0; j < 2; ++j) {
    auto expect = AlgebraElement::zero(s);
    for (int i = 0; i < 3; ++i) expect += x.coord(i) * e[j][i];
    EXPECT_LE(distance(tx.coord(j), expect), 1e-13);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(distance(t.entry(j, i), e[j][i]), 0.0);
  }
}

// R(T o S) = R(T) R(S), R(T^*) = R(T)^H, R(T) realize(x) = realize(T x).
TEST(ModuleOperator, RealizationIsAStarHomomorphism) {
  auto rng = CounterRng::stream(7, {3});
  for (const auto& s : kShapes) {
    auto t = gen::random_operator(s, 3, 2, rng);
    auto r = gen::random_operator(s, 2, 3, rng);
    auto x = gen::random_vector(s, 2, rng);
    EXPECT_LE((complex_realization(compose(t, r)) - complex_realization(t) * complex_realization(r)).norm(), 1e-12);
    EXPECT_LE((complex_realization(adjoint(t)) - complex_realization(t).adjoint()).norm(), 0.0);
    EXPECT_LE((complex_realization(r) * realize_vector(x) - realize_vector(r.apply(x))).norm(), 1e-12);
  }
}

TEST(ModuleOperator, ScalarRealizationIsTheCoefficientMatrix) {
  auto s = AlgebraShape::scalar();
  CMatrix u(2, 3);
  u << 1, 2, 3, cplx(0, 1), 5, 6;
  std::vector<std::vector<AlgebraElement>> e(2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 3; ++i) e[j].push_back(AlgebraElement::scalar(s, u(j, i)));
  EXPECT_EQ((complex_realization(ModuleOperator::from_entries(s, 3, e)) - u).norm(), 0.0);
}

TEST(ModuleOperator, NormsAgainstSvdOracle) {
  auto rng = CounterRng::stream(7, {4});
  for (const auto& s : kShapes) {
    for (int rep = 0; rep < 5; ++rep) {
      auto t = gen::random_operator(s, 3, 3, rng);
      EXPECT_NEAR(op_norm(t), oracle::op_norm(t), 1e-12 * oracle::op_norm(t));
      EXPECT_NEAR(op_min_sv(t), oracle::op_min_sv(t), 1e-12 * oracle::op_norm(t));
      auto x = gen::random_vector(s, 3, rng);
      EXPECT_LE(norm(t.apply(x)), op_norm(t) * norm(x) * (1 + 1e-12));
    }
  }
}

TEST(ModuleOperator, Inverse) {
  auto rng = CounterRng::stream(7, {5});
  for (const auto& s : kShapes) {
    auto t = gen::random_invertible(s, 3, rng);
    auto inv = op_invert(t);
    auto id = ModuleOperator::identity(s, 3);
    EXPECT_LE(op_norm(compose(t, inv) - id), 1e-12);
    EXPECT_NEAR(op_norm(inv), 1.0 / op_min_sv(t), 1e-10 * op_norm(inv));
  }
  AlgebraShape s({2});
  EXPECT_THROW(op_invert(ModuleOperator::zero(s, 2, 2)), singular_error);
  EXPECT_THROW(op_invert(ModuleOperator::zero(s, 2, 3)), singular_error);
  EXPECT_FALSE(op_is_invertible(0.0 * ModuleOperator::identity(s, 2)));
}

TEST(ModuleOperator, ShapeErrors) {
  AlgebraShape s({2});
  auto a = ModuleOperator::zero(s, 2, 3);
  auto b = ModuleOperator::zero(s, 2, 3);
  EXPECT_THROW(compose(a, b), shape_error);
  EXPECT_THROW(a + ModuleOperator::zero(s, 3, 2), shape_error);
  EXPECT_THROW(a.apply(ModuleVector::zero(s, 3)), shape_error);
  EXPECT_THROW(ModuleOperator(s, 2, 2, {CMatrix::Zero(3, 4)}), shape_error);
  EXPECT_THROW(a.entry(3, 0), shape_error);
}

TEST(Theta, ElementaryOperator) {
  auto rng = CounterRng::stream(7, {6});
  for (const auto& s : kShapes) {
    auto x = gen::random_vector(s, 2, rng), y = gen::random_vector(s, 3, rng), z = gen::random_vector(s, 2, rng);
    auto t = theta(x, y);
    EXPECT_LE(distance(t.apply(z), inner_product(z, x) * y), 1e-12);
    EXPECT_LE(op_norm(adjoint(t) - theta(y, x)), 1e-14);
  }
}

TEST(FiniteRank, DecompositionReconstructs) {
  auto rng = CounterRng::stream(7, {7});
  for (const auto& s : kShapes) {
    for (int r = 1; r <= 3; ++r) {
      auto t = gen::random_low_rank(s, 4, 3, r, rng);
      auto pairs = finite_rank_decompose(t);
      EXPECT_LE(static_cast<int>(pairs.size()), r);
      EXPECT_LE(op_norm(sum_of_thetas(pairs, s, 4, 3) - t), 1e-10 * std::max(1.0, op_norm(t)));
      EXPECT_LE(complex_rank(t), static_cast<Eigen::Index>(r) * s.complex_dim());
    }
  }
  auto zero = ModuleOperator::zero(AlgebraShape({2}), 2, 2);
  EXPECT_TRUE(finite_rank_decompose(zero).empty());
}

TEST(SpectralBounds, SelfAdjointOnly) {
  auto rng = CounterRng::stream(7, {8});
  for (const auto& s : kShapes) {
    auto t = gen::random_operator(s, 3, 3, rng);
    auto h = compose(adjoint(t), t);
    auto sb = spectral_bounds(h);
    auto ev = oracle::eigenvalues(complex_realization(h));
    EXPECT_NEAR(sb.lower, ev.minCoeff(), 1e-12 * ev.maxCoeff());
    EXPECT_NEAR(sb.upper, ev.maxCoeff(), 1e-12 * ev.maxCoeff());
    EXPECT_TRUE(op_positive(h));
    EXPECT_FALSE(op_positive(-1.0 * h - ModuleOperator::identity(s, 3)));
    EXPECT_THROW(spectral_bounds(h + cplx(0, 1) * ModuleOperator::identity(s, 3)), domain_error);
  }
}
