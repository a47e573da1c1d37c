#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cstar/operator.hpp"

namespace cstar {

struct FrameBounds {
  double lower = 0.0;  // C: smallest eigenvalue of S
  double upper = 0.0;  // D: largest eigenvalue of S
  bool is_frame = false;
  bool optimal = true;
};

// Analysis operator T: A^k -> A^N, (Tx)_n = <x, x_n>. Coefficient c_{n,i}
// is (x_n)_i^*, so per block column group n of t is X_n^H.
inline ModuleOperator analysis_operator(const AlgebraShape& shape, int rank,
                                        const std::vector<ModuleVector>& xs) {
  const int n = static_cast<int>(xs.size());
  auto t = ModuleOperator::zero(shape, rank, n);
  for (int j = 0; j < n; ++j) {
    const auto& x = xs[static_cast<std::size_t>(j)];
    require_same_shape(shape, x.shape(), "analysis_operator");
    if (x.rank() != rank) throw shape_error("analysis_operator: sequence element has wrong rank");
    for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
      const int d = shape.dim(i);
      t.block(i).middleCols(j * d, d) = x.block(i).adjoint();
    }
  }
  return t;
}

// A finite sequence {x_n} in A^k with its analysis operator, frame operator
// S = T*T and optimal bounds. Sequences that are not frames are allowed
// (Bessel sequences, arbitrary perturbations); they report is_frame = false.
class FrameSequence {
 public:
  FrameSequence(AlgebraShape shape, int rank, std::vector<ModuleVector> vectors,
                const Tolerances& tol = {})
      : shape_(std::move(shape)),
        rank_(rank),
        vectors_(std::move(vectors)),
        analysis_(cstar::analysis_operator(shape_, rank_, vectors_)),
        frame_op_(compose(adjoint(analysis_), analysis_)) {
    if (vectors_.empty()) throw shape_error("FrameSequence: empty sequence");
    auto sb = spectral_bounds(frame_op_, tol);
    bounds_.lower = std::max(0.0, sb.lower);
    bounds_.upper = sb.upper;
    bounds_.is_frame = bounds_.upper > 0.0 && bounds_.lower > tol.frame * bounds_.upper;
  }

  explicit FrameSequence(std::vector<ModuleVector> vectors, const Tolerances& tol = {})
      : FrameSequence(first_shape(vectors), first_rank(vectors), vectors, tol) {}

  const AlgebraShape& shape() const { return shape_; }
  int rank() const { return rank_; }
  int size() const { return static_cast<int>(vectors_.size()); }
  const std::vector<ModuleVector>& vectors() const { return vectors_; }
  const ModuleVector& operator[](int n) const { return vectors_.at(static_cast<std::size_t>(n)); }

  const ModuleOperator& analysis_operator() const { return analysis_; }
  ModuleOperator synthesis_operator() const { return adjoint(analysis_); }
  const ModuleOperator& frame_operator() const { return frame_op_; }
  const FrameBounds& bounds() const { return bounds_; }
  bool is_frame() const { return bounds_.is_frame; }

 private:
  static AlgebraShape first_shape(const std::vector<ModuleVector>& v) {
    if (v.empty()) throw shape_error("FrameSequence: empty sequence");
    return v.front().shape();
  }
  static int first_rank(const std::vector<ModuleVector>& v) {
    if (v.empty()) throw shape_error("FrameSequence: empty sequence");
    return v.front().rank();
  }

  AlgebraShape shape_;
  int rank_;
  std::vector<ModuleVector> vectors_;
  ModuleOperator analysis_;
  ModuleOperator frame_op_;
  FrameBounds bounds_;
};

// Sequence {T x_n}.
inline FrameSequence image(const ModuleOperator& t, const FrameSequence& xs, const Tolerances& tol = {}) {
  std::vector<ModuleVector> out;
  for (const auto& x : xs.vectors()) out.push_back(t.apply(x));
  return {xs.shape(), t.codomain_rank(), std::move(out), tol};
}

// Sequence {x_n - y_n}.
inline FrameSequence difference(const FrameSequence& xs, const FrameSequence& ys, const Tolerances& tol = {}) {
  if (xs.size() != ys.size()) throw shape_error("difference: sequence lengths differ");
  std::vector<ModuleVector> out;
  for (int n = 0; n < xs.size(); ++n) out.push_back(xs[n] - ys[n]);
  return {xs.shape(), xs.rank(), std::move(out), tol};
}

// Sequence from the images of the standard basis under T*: element n is T*(e_n).
inline FrameSequence sequence_from_analysis(const ModuleOperator& t, const Tolerances& tol = {}) {
  auto basis = standard_basis(t.shape(), t.codomain_rank());
  auto syn = adjoint(t);
  std::vector<ModuleVector> out;
  for (const auto& e : basis) out.push_back(syn.apply(e));
  return {t.shape(), t.domain_rank(), std::move(out), tol};
}

inline ModuleVector analysis(const FrameSequence& xs, const ModuleVector& x) {
  return xs.analysis_operator().apply(x);
}

// sum_n a_n . x_n
inline ModuleVector synthesis(const FrameSequence& xs, const ModuleVector& a) {
  if (a.rank() != xs.size()) throw shape_error("synthesis: coefficient length does not match sequence");
  return xs.synthesis_operator().apply(a);
}

inline const FrameBounds& frame_bounds(const FrameSequence& xs) { return xs.bounds(); }

inline void require_frame(const FrameSequence& xs, const char* where) {
  if (!xs.is_frame()) throw structure_error(std::string(where) + ": sequence is not a frame");
}

// {S^{-1} x_n}.
inline FrameSequence canonical_dual(const FrameSequence& xs, const Tolerances& tol = {}) {
  require_frame(xs, "canonical_dual");
  return image(op_invert(xs.frame_operator(), tol), xs, tol);
}

struct Reconstruction {
  ModuleVector dual_analysis;   // sum_n <x, S^-1 x_n> x_n
  ModuleVector dual_synthesis;  // sum_n <x, x_n> S^-1 x_n
  double residual = 0.0;        // max of both distances to x
};

// Both reconstruction sums, accumulated term by term in index order.
inline Reconstruction reconstruct(const FrameSequence& xs, const ModuleVector& x, const Tolerances& tol = {}) {
  auto duals = canonical_dual(xs, tol);
  Reconstruction r{ModuleVector::zero(xs.shape(), xs.rank()), ModuleVector::zero(xs.shape(), xs.rank())};
  for (int n = 0; n < xs.size(); ++n) {
    r.dual_analysis += inner_product(x, duals[n]) * xs[n];
    r.dual_synthesis += inner_product(x, xs[n]) * duals[n];
  }
  r.residual = std::max(distance(r.dual_analysis, x), distance(r.dual_synthesis, x));
  return r;
}

// |T_X^* T_{X^d} - Id|.
inline double dual_pair_residual(const FrameSequence& xs, const FrameSequence& xd) {
  if (xs.size() != xd.size()) throw shape_error("is_dual_pair: sequence lengths differ");
  require_same_shape(xs.shape(), xd.shape(), "is_dual_pair");
  if (xs.rank() != xd.rank()) throw shape_error("is_dual_pair: ambient ranks differ");
  auto prod = compose(xs.synthesis_operator(), xd.analysis_operator());
  return op_norm(prod - ModuleOperator::identity(xs.shape(), xs.rank()));
}

// x = sum_n <x, x^d_n> x_n for all x.
inline bool is_dual_pair(const FrameSequence& xs, const FrameSequence& xd, double tol = 1e-9) {
  return dual_pair_residual(xs, xd) <= tol;
}

// {V(e_n)} for an invertible V: A^N -> A^k.
inline FrameSequence riesz_from_operator(const ModuleOperator& v, const Tolerances& tol = {}) {
  if (!v.is_square()) {
    throw structure_error("riesz_from_operator: an invertible map A^" + std::to_string(v.domain_rank()) +
                          " -> A^" + std::to_string(v.codomain_rank()) + " does not exist");
  }
  if (!op_is_invertible(v, tol)) throw singular_error("riesz_from_operator: operator is not invertible");
  auto basis = standard_basis(v.shape(), v.domain_rank());
  std::vector<ModuleVector> out;
  for (const auto& e : basis) out.push_back(v.apply(e));
  return {v.shape(), v.codomain_rank(), std::move(out), tol};
}

struct RieszCheck {
  bool is_riesz = false;
  std::string reason;
};

// Modular Riesz basis: N = k and the synthesis operator is invertible.
inline RieszCheck is_modular_riesz(const FrameSequence& xs, const Tolerances& tol = {}) {
  if (xs.size() != xs.rank()) {
    return {false, "length " + std::to_string(xs.size()) + " differs from module rank " +
                       std::to_string(xs.rank())};
  }
  if (!op_is_invertible(xs.synthesis_operator(), tol)) return {false, "synthesis operator is singular"};
  return {true, ""};
}

// A frame has a unique dual iff its analysis operator is surjective,
// i.e. T T* is invertible on A^N.
inline bool has_unique_dual(const FrameSequence& xs, const Tolerances& tol = {}) {
  require_frame(xs, "has_unique_dual");
  const auto& t = xs.analysis_operator();
  return op_is_invertible(compose(t, adjoint(t)), tol);
}

// Largest |<x_m, y_n> - delta_mn 1_A| over the table.
inline double biorthogonality_residual(const FrameSequence& xs, const FrameSequence& ys) {
  if (xs.size() != ys.size()) throw shape_error("biorthogonality_residual: lengths differ");
  const auto one = AlgebraElement::identity(xs.shape());
  const auto zero = AlgebraElement::zero(xs.shape());
  double r = 0.0;
  for (int m = 0; m < xs.size(); ++m)
    for (int n = 0; n < ys.size(); ++n)
      r = std::max(r, distance(inner_product(xs[m], ys[n]), m == n ? one : zero));
  return r;
}

}  // namespace cstar
