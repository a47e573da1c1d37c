#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cstar/multiplier.hpp"
#include "cstar/rng.hpp"

// Seeded random instances. Every generator is constructive: scales are
// solved from computed norms so that a requested quantity is hit exactly,
// and every structural property promised by a generator is checked before
// the instance is returned.
namespace cstar::gen {

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
  CMatrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_unit_box();
  return m;
}

inline AlgebraElement random_element(const AlgebraShape& shape, CounterRng& rng) {
  std::vector<CMatrix> b;
  for (int d : shape.dims()) b.push_back(random_matrix(d, d, rng));
  return {shape, std::move(b)};
}

inline AlgebraElement random_central(const AlgebraShape& shape, CounterRng& rng) {
  std::vector<cplx> z;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) z.push_back(rng.complex_unit_box());
  return AlgebraElement::central(shape, z);
}

inline AlgebraElement random_positive(const AlgebraShape& shape, CounterRng& rng) {
  auto a = random_element(shape, rng);
  return a * adjoint(a);
}

inline ModuleVector random_vector(const AlgebraShape& shape, int rank, CounterRng& rng) {
  std::vector<CMatrix> rows;
  for (int d : shape.dims()) rows.push_back(random_matrix(d, d * rank, rng));
  return {shape, rank, std::move(rows)};
}

inline ModuleOperator random_operator(const AlgebraShape& shape, int domain_rank, int codomain_rank,
                                      CounterRng& rng) {
  std::vector<CMatrix> b;
  for (int d : shape.dims()) b.push_back(random_matrix(d * domain_rank, d * codomain_rank, rng));
  return {shape, domain_rank, codomain_rank, std::move(b)};
}

// Random operator rescaled to have operator norm exactly `target`.
inline ModuleOperator random_contraction(const AlgebraShape& shape, int domain_rank, int codomain_rank,
                                         double target, CounterRng& rng) {
  auto e = random_operator(shape, domain_rank, codomain_rank, rng);
  const double n = op_norm(e);
  return (target / n) * e;
}

// Operator of A-rank at most r: a sum of r elementary operators.
inline ModuleOperator random_low_rank(const AlgebraShape& shape, int domain_rank, int codomain_rank,
                                      int r, CounterRng& rng) {
  auto t = ModuleOperator::zero(shape, domain_rank, codomain_rank);
  for (int j = 0; j < r; ++j) {
    auto a = random_vector(shape, domain_rank, rng);
    auto b = random_vector(shape, codomain_rank, rng);
    t += theta(a, b);
  }
  return t;
}

// c (I + B) with |B| = b in [0.2, 0.7] and c in [0.5, 2]: condition number
// at most 17/3.
inline ModuleOperator random_invertible(const AlgebraShape& shape, int rank, CounterRng& rng) {
  const double b = rng.uniform(0.2, 0.7);
  const double c = rng.uniform(0.5, 2.0);
  auto v = ModuleOperator::identity(shape, rank) + random_contraction(shape, rank, rank, b, rng);
  return c * v;
}

inline ModuleOperator near_identity_symbol(const AlgebraShape& shape, int n, double target, CounterRng& rng) {
  return ModuleOperator::identity(shape, n) + random_contraction(shape, n, n, target, rng);
}

inline DiagonalSymbol central_diagonal_symbol(const AlgebraShape& shape, int n, CounterRng& rng) {
  std::vector<AlgebraElement> m;
  for (int j = 0; j < n; ++j) m.push_back(random_central(shape, rng));
  return {shape, std::move(m)};
}

inline std::vector<ModuleVector> random_sequence(const AlgebraShape& shape, int rank, int n, CounterRng& rng) {
  std::vector<ModuleVector> out;
  for (int j = 0; j < n; ++j) out.push_back(random_vector(shape, rank, rng));
  return out;
}

// Random frame of n vectors in A^rank with C >= min_ratio * D.
inline FrameSequence random_frame(const AlgebraShape& shape, int rank, int n, CounterRng& rng,
                                  double min_ratio = 0.02, const Tolerances& tol = {}) {
  if (n < rank) throw shape_error("random_frame: need N >= k for a frame of A^k");
  for (int attempt = 0; attempt < 200; ++attempt) {
    FrameSequence x(shape, rank, random_sequence(shape, rank, n, rng), tol);
    if (x.is_frame() && x.bounds().lower >= min_ratio * x.bounds().upper) return x;
  }
  throw structure_error("random_frame: no frame with the requested bound ratio found");
}

inline FrameSequence random_riesz_basis(const AlgebraShape& shape, int rank, CounterRng& rng,
                                        const Tolerances& tol = {}) {
  auto x = riesz_from_operator(random_invertible(shape, rank, rng), tol);
  if (!is_modular_riesz(x, tol).is_riesz) throw structure_error("random_riesz_basis: post-check failed");
  return x;
}

struct DualPair {
  FrameSequence frame;
  FrameSequence dual;
};

// Alternative dual X^d = {S^-1 x_n + z_n}, where {z_n} has analysis
// operator (Id - Q) R with Q = T S^-1 T^* the projection onto the range of
// T. Then T_X^* T_Z = 0, so X^d is a dual of X. The perturbation is scaled
// to |T_Z| = rho |T_{canonical dual}|; it vanishes when N = k.
inline DualPair alternative_dual(const FrameSequence& x, double rho, CounterRng& rng,
                                 const Tolerances& tol = {}) {
  require_frame(x, "alternative_dual");
  auto canon = canonical_dual(x, tol);
  const auto& t = x.analysis_operator();
  auto sinv = op_invert(x.frame_operator(), tol);
  auto q = compose(t, compose(sinv, adjoint(t)));
  auto r = random_operator(x.shape(), x.rank(), x.size(), rng);
  auto tz = compose(ModuleOperator::identity(x.shape(), x.size()) - q, r);
  const double nz = op_norm(tz);
  ModuleOperator td = canon.analysis_operator();
  if (nz > 1e-12 * op_norm(r)) td += (rho * op_norm(canon.analysis_operator()) / nz) * tz;
  auto dual = sequence_from_analysis(td, tol);
  if (!is_dual_pair(x, dual)) throw structure_error("alternative_dual: post-check failed");
  return {x, dual};
}

// Y = X - delta P with delta chosen so that the frame operator of {x_n - y_n}
// has largest eigenvalue exactly `target`.
inline FrameSequence perturb_difference_bound(const FrameSequence& x, double target, CounterRng& rng,
                                              const Tolerances& tol = {}) {
  FrameSequence p(x.shape(), x.rank(), random_sequence(x.shape(), x.rank(), x.size(), rng), tol);
  const double delta = std::sqrt(target / p.bounds().upper);
  std::vector<ModuleVector> y;
  for (int n = 0; n < x.size(); ++n) y.push_back(x[n] - cplx(delta) * p[n]);
  return {x.shape(), x.rank(), std::move(y), tol};
}

// Y = X + delta P with sum_n |y_n - x_n|^2 exactly `target`.
inline FrameSequence perturb_sum_squares(const FrameSequence& x, double target, CounterRng& rng,
                                         const Tolerances& tol = {}) {
  auto p = random_sequence(x.shape(), x.rank(), x.size(), rng);
  double s = 0.0;
  for (const auto& v : p) s += norm(v) * norm(v);
  const double delta = std::sqrt(target / s);
  std::vector<ModuleVector> y;
  for (int n = 0; n < x.size(); ++n) y.push_back(x[n] + cplx(delta) * p[static_cast<std::size_t>(n)]);
  return {x.shape(), x.rank(), std::move(y), tol};
}

// Shapes used by the suite: scalar, one matrix block, and mixed blocks.
inline AlgebraShape random_shape(CounterRng& rng) {
  static const std::vector<std::vector<int>> shapes = {{1}, {2}, {2, 1}, {1, 1}, {3}};
  return AlgebraShape(shapes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(shapes.size()) - 1))]);
}

}  // namespace cstar::gen
