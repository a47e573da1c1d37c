#include <gtest/gtest.h>

#include "cstar/crosscheck.hpp"

using namespace cstar;

TEST(Crosscheck, MercedesBenzIsTight) {
  auto mb = mercedes_benz_frame();
  EXPECT_NEAR(mb.bounds().lower, 1.5, 1e-12);
  EXPECT_NEAR(mb.bounds().upper, 1.5, 1e-12);
  // S = 3/2 Id, canonical dual 2/3 x_n.
  auto dual = canonical_dual(mb);
  for (int n = 0; n < 3; ++n) EXPECT_LE(distance(dual[n], cplx(2.0 / 3.0) * mb[n]), 1e-14);
  auto h = hilbert::bounds(to_hilbert(mb));
  EXPECT_NEAR(h.first, 1.5, 1e-12);
  EXPECT_NEAR(h.second, 1.5, 1e-12);
}

TEST(Crosscheck, DoubleSumByHand) {
  // X = Y = e_1, e_2 and U the swap: M h = <h, e_2> e_1 + <h, e_1> e_2.
  CMatrix f = CMatrix::Identity(2, 2);
  CMatrix u(2, 2);
  u << 0.0, 1.0, 1.0, 0.0;
  CMatrix m = hilbert::multiplier(u, {f}, {f});
  EXPECT_EQ(m, u);
  // Rank-one U = e_1 e_2^T on a scaled pair: M h = 2 * 3 <h, e_2> e_1.
  CMatrix r = CMatrix::Zero(2, 2);
  r(0, 1) = 1.0;
  CMatrix m2 = hilbert::multiplier(r, {3.0 * f}, {2.0 * f});
  CMatrix expect = CMatrix::Zero(2, 2);
  expect(0, 1) = 6.0;
  EXPECT_LE((m2 - expect).norm(), 1e-15);
  auto x = from_hilbert(2.0 * f), y = from_hilbert(3.0 * f);
  CMatrix module = complex_realization(Multiplier(symbol_from_matrix(r), y, x).assembled());
  EXPECT_LE((module - expect).norm(), 1e-15);
}

TEST(Crosscheck, ComplexEntries) {
  CMatrix f(2, 3), g(2, 3), u(3, 3);
  f << cplx(1, 1), 0.5, cplx(0, -2), 0.0, cplx(1, -1), 1.0;
  g << 1.0, cplx(0, 1), 2.0, cplx(0.5, 0.5), 1.0, cplx(-1, 0);
  u << 1.0, cplx(0, 2), 0.0, -1.0, 0.5, cplx(1, 1), 0.0, 0.0, cplx(0, -3);
  auto inst = crosscheck_instance(from_hilbert(f), from_hilbert(g), u);
  EXPECT_LE(inst.max_dev(), 1e-12);
  // Against the matrix form T_Y^* U T_X = G U^T F^H (coefficients of x_j on e_col are conj(F)).
  CMatrix dense = g * u * f.adjoint();
  EXPECT_LE((hilbert::multiplier(u, {g}, {f}) - dense).norm(), 1e-12);
}

TEST(Crosscheck, HundredSeededInstances) {
  auto run = scalar_crosscheck(42, 100);
  EXPECT_EQ(run.instances.size(), 100u);
  EXPECT_TRUE(run.mercedes_pass());
  EXPECT_LE(run.max_dev(), 1e-10);
  EXPECT_TRUE(run.pass());
  auto again = scalar_crosscheck(42, 100);
  EXPECT_EQ(io::crosscheck_to_json(run).dump(), io::crosscheck_to_json(again).dump());
}
