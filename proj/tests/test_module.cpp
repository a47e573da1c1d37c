#include <gtest/gtest.h>

#include "cstar/generators.hpp"
#include "oracle.hpp"

using namespace cstar;

namespace {

const std::vector<AlgebraShape> kShapes = {AlgebraShape({1}), AlgebraShape({2}), AlgebraShape({2, 1}),
                                           AlgebraShape({1, 1}), AlgebraShape({3})};

}  // namespace

// <a x, y> = a <x, y>, <x, y>^* = <y, x>, <x, x> >= 0, |x|^2 = |<x, x>|.
TEST(InnerProduct, Axioms) {
  auto rng = CounterRng::stream(5, {1});
  for (const auto& s : kShapes) {
    for (int k = 1; k <= 3; ++k) {
      auto x = gen::random_vector(s, k, rng), y = gen::random_vector(s, k, rng), z = gen::random_vector(s, k, rng);
      auto a = gen::random_element(s, rng);
      EXPECT_LE(distance(inner_product(a * x, y), a * inner_product(x, y)), 1e-12);
      EXPECT_LE(distance(adjoint(inner_product(x, y)), inner_product(y, x)), 1e-13);
      EXPECT_LE(distance(inner_product(x + z, y), inner_product(x, y) + inner_product(z, y)), 1e-13);
      EXPECT_TRUE(is_positive(inner_product(x, x)));
      const double nx = norm(x);
      EXPECT_NEAR(nx * nx, norm(inner_product(x, x)), 1e-12 * nx * nx);
      // <x, y><y, x> <= |<y, y>| <x, x>
      auto lhs = inner_product(x, y) * inner_product(y, x);
      auto rhs = norm(inner_product(y, y)) * inner_product(x, x);
      EXPECT_TRUE(leq(lhs, rhs));
      // |a x| <= |a||x|
      EXPECT_LE(norm(a * x), norm(a) * nx * (1 + 1e-12));
    }
  }
}

TEST(StandardBasis, Orthonormal) {
  for (const auto& s : kShapes) {
    auto e = standard_basis(s, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        auto expect = i == j ? AlgebraElement::identity(s) : AlgebraElement::zero(s);
        EXPECT_EQ(distance(inner_product(e[i], e[j]), expect), 0.0);
      }
  }
  EXPECT_THROW(standard_basis(AlgebraShape({1}), 0), shape_error);
}

TEST(ModuleVector, CoordinatesAndRealization) {
  auto rng = CounterRng::stream(5, {2});
  AlgebraShape s({2, 1});
  auto x = gen::random_vector(s, 3, rng);
  auto y = ModuleVector::from_coords(s, x.coords());
  EXPECT_EQ(distance(x, y), 0.0);
  auto v = realize_vector(x);
  EXPECT_EQ(v.size(), 3 * s.complex_dim());
  EXPECT_EQ(distance(vector_from_realization(s, 3, v), x), 0.0);
  EXPECT_THROW(vector_from_realization(s, 2, v), shape_error);
  EXPECT_THROW(x.coord(3), shape_error);
  EXPECT_THROW(x + gen::random_vector(s, 2, rng), shape_error);
}

// Module norm is max over blocks of the spectral norm of the row matrix.
TEST(ModuleVector, NormOracle) {
  auto rng = CounterRng::stream(5, {3});
  AlgebraShape s({2, 1});
  auto x = gen::random_vector(s, 2, rng);
  const double ref = std::max(oracle::norm(x.block(0)), oracle::norm(x.block(1)));
  EXPECT_NEAR(norm(x), ref, 1e-13 * ref);
}

TEST(ModuleVector, ScalarCaseIsEuclidean) {
  auto s = AlgebraShape::scalar();
  auto x = ModuleVector::from_coords(s, {AlgebraElement::scalar(s, 3.0), AlgebraElement::scalar(s, cplx(0, 4))});
  EXPECT_DOUBLE_EQ(norm(x), 5.0);
  EXPECT_EQ(inner_product(x, x).block(0)(0, 0), cplx(25, 0));
}
