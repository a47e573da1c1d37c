#include <gtest/gtest.h>

#include "cstar/generators.hpp"
#include "oracle.hpp"

using namespace cstar;

TEST(Multiplier, FactorwiseApplyMatchesAssembly) {
  auto rng = CounterRng::stream(13, {1});
  for (auto dims : std::vector<std::vector<int>>{{1}, {2}, {2, 1}}) {
    AlgebraShape s(dims);
    auto x = gen::random_frame(s, 2, 4, rng), y = gen::random_frame(s, 2, 4, rng);
    auto u = gen::random_operator(s, 4, 4, rng);
    Multiplier m(u, y, x);
    auto v = gen::random_vector(s, 2, rng);
    EXPECT_LE(distance(m.apply(v), m.assembled().apply(v)), 1e-12 * norm(v) * op_norm(m.assembled()));
    // sum_k sum_j <v, x_j> c_{kj} y_k
    auto direct = ModuleVector::zero(s, 2);
    for (int kk = 0; kk < 4; ++kk)
      for (int j = 0; j < 4; ++j) direct += (inner_product(v, x[j]) * u.entry(kk, j)) * y[kk];
    EXPECT_LE(distance(m.apply(v), direct), 1e-11);
  }
}

TEST(Multiplier, IdentitySymbolGivesFrameOperator) {
  auto rng = CounterRng::stream(13, {2});
  AlgebraShape s({2, 1});
  auto x = gen::random_frame(s, 2, 3, rng);
  Multiplier m(ModuleOperator::identity(s, 3), x, x);
  EXPECT_LE(op_norm(m.assembled() - x.frame_operator()), 1e-12);
  EXPECT_TRUE(multiplier_positive(m));
}

TEST(Multiplier, BesselMultiplierWithCentralSymbol) {
  auto rng = CounterRng::stream(13, {3});
  AlgebraShape s({2, 1});
  auto x = gen::random_frame(s, 2, 3, rng), y = gen::random_frame(s, 2, 3, rng);
  auto m = gen::central_diagonal_symbol(s, 3, rng);
  Multiplier bm(m, y, x);
  auto v = gen::random_vector(s, 2, rng);
  auto direct = ModuleVector::zero(s, 2);
  for (int n = 0; n < 3; ++n) direct += (m.entries()[n] * inner_product(v, x[n])) * y[n];
  EXPECT_LE(distance(bm.apply(v), direct), 1e-12);
  EXPECT_LE(op_norm(bm.assembled()),
            std::sqrt(x.bounds().upper * y.bounds().upper) * m.sup_norm() * (1 + 1e-12));
}

TEST(Multiplier, NonCentralSymbolReportsIndex) {
  auto rng = CounterRng::stream(13, {4});
  AlgebraShape s({2});
  std::vector<AlgebraElement> m{AlgebraElement::identity(s), gen::random_element(s, rng)};
  try {
    DiagonalSymbol d(s, m);
    FAIL() << "accepted a non-central entry";
  } catch (const not_central_error& e) {
    EXPECT_EQ(e.index, 1u);
  }
}

TEST(Multiplier, AdjointIdentity) {
  auto rng = CounterRng::stream(13, {5});
  AlgebraShape s({2, 1});
  auto x = gen::random_frame(s, 2, 3, rng), y = gen::random_frame(s, 2, 3, rng);
  Multiplier m(gen::random_operator(s, 3, 3, rng), y, x);
  auto madj = multiplier_adjoint(m);
  EXPECT_LE(op_norm(madj.assembled() - adjoint(m.assembled())), 1e-12);
  EXPECT_THROW(multiplier_positive(m), structure_error);
}

TEST(Multiplier, ShapeErrors) {
  auto rng = CounterRng::stream(13, {6});
  AlgebraShape s({1});
  auto x = gen::random_frame(s, 2, 3, rng), y = gen::random_frame(s, 2, 4, rng);
  EXPECT_THROW(Multiplier(ModuleOperator::identity(s, 3), y, x), shape_error);
  EXPECT_THROW(Multiplier(ModuleOperator::identity(s, 4), x, x), shape_error);
  EXPECT_THROW(Symbol(ModuleOperator::zero(s, 3, 2)), shape_error);
  auto z = gen::random_frame(AlgebraShape({2}), 2, 3, rng);
  EXPECT_THROW(Multiplier(ModuleOperator::identity(s, 3), x, z), shape_error);
}
