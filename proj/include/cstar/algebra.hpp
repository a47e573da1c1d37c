#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cstar/dense.hpp"
#include "cstar/errors.hpp"
#include "cstar/tolerances.hpp"

namespace cstar {

// Block structure of a finite-dimensional C*-algebra A = M_{d_1} + ... + M_{d_r}.
class AlgebraShape {
 public:
  AlgebraShape() : dims_{1} {}

  explicit AlgebraShape(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
    if (dims_.empty()) throw shape_error("AlgebraShape: no blocks");
    for (int d : dims_)
      if (d < 1) throw shape_error("AlgebraShape: block dimension must be >= 1");
  }

  static AlgebraShape scalar() { return AlgebraShape({1}); }

  std::size_t num_blocks() const { return dims_.size(); }
  int dim(std::size_t block) const { return dims_.at(block); }
  const std::vector<int>& dims() const { return dims_; }

  // Complex dimension of A, sum of d_i^2.
  int complex_dim() const {
    return std::accumulate(dims_.begin(), dims_.end(), 0,
                           [](int acc, int d) { return acc + d * d; });
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(dims_[i]);
    }
    return s + "]";
  }

  bool operator==(const AlgebraShape&) const = default;

 private:
  std::vector<int> dims_;
};

inline void require_same_shape(const AlgebraShape& a, const AlgebraShape& b,
                               const char* where) {
  if (!(a == b)) {
    throw shape_error(std::string(where) + ": algebra shape mismatch " +
                      a.to_string() + " vs " + b.to_string());
  }
}

class AlgebraElement {
 public:
  AlgebraElement() : AlgebraElement(zero(AlgebraShape::scalar())) {}

  AlgebraElement(AlgebraShape shape, std::vector<CMatrix> blocks)
      : shape_(std::move(shape)), blocks_(std::move(blocks)) {
    if (blocks_.size() != shape_.num_blocks()) {
      throw shape_error("AlgebraElement: block count does not match shape");
    }
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (blocks_[i].rows() != shape_.dim(i) || blocks_[i].cols() != shape_.dim(i)) {
        throw shape_error("AlgebraElement: block " + std::to_string(i) +
                          " has wrong size");
      }
    }
  }

  static AlgebraElement zero(const AlgebraShape& shape) {
    std::vector<CMatrix> b;
    for (int d : shape.dims()) b.push_back(CMatrix::Zero(d, d));
    return {shape, std::move(b)};
  }

  static AlgebraElement identity(const AlgebraShape& shape) {
    return scalar(shape, 1.0);
  }

  static AlgebraElement scalar(const AlgebraShape& shape, cplx z) {
    std::vector<CMatrix> b;
    for (int d : shape.dims()) b.push_back(z * CMatrix::Identity(d, d));
    return {shape, std::move(b)};
  }

  // Central element with value z_i * I on block i.
  static AlgebraElement central(const AlgebraShape& shape, const std::vector<cplx>& z) {
    if (z.size() != shape.num_blocks()) {
      throw shape_error("AlgebraElement::central: one scalar per block required");
    }
    std::vector<CMatrix> b;
    for (std::size_t i = 0; i < z.size(); ++i) {
      b.push_back(z[i] * CMatrix::Identity(shape.dim(i), shape.dim(i)));
    }
    return {shape, std::move(b)};
  }

  const AlgebraShape& shape() const { return shape_; }
  const CMatrix& block(std::size_t i) const { return blocks_.at(i); }
  CMatrix& block(std::size_t i) { return blocks_.at(i); }
  const std::vector<CMatrix>& blocks() const { return blocks_; }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    require_same_shape(shape_, o.shape_, "alg_add");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += o.blocks_[i];
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    require_same_shape(shape_, o.shape_, "alg_sub");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= o.blocks_[i];
    return *this;
  }
  AlgebraElement& operator*=(cplx z) {
    for (auto& b : blocks_) b *= z;
    return *this;
  }

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(cplx z, AlgebraElement a) { return a *= z; }
  friend AlgebraElement operator-(AlgebraElement a) { return a *= -1.0; }

  // C*-algebra product, blockwise.
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_shape(a.shape_, b.shape_, "alg_mul");
    std::vector<CMatrix> out;
    out.reserve(a.blocks_.size());
    for (std::size_t i = 0; i < a.blocks_.size(); ++i) out.push_back(a.blocks_[i] * b.blocks_[i]);
    return {a.shape_, std::move(out)};
  }

 private:
  AlgebraShape shape_;
  std::vector<CMatrix> blocks_;
};

inline AlgebraElement alg_mul(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }

inline AlgebraElement adjoint(const AlgebraElement& a) {
  std::vector<CMatrix> out;
  for (const auto& b : a.blocks()) out.push_back(b.adjoint());
  return {a.shape(), std::move(out)};
}

// C*-norm: largest singular value over all blocks.
inline double norm(const AlgebraElement& a) {
  double n = 0.0;
  for (const auto& b : a.blocks()) n = std::max(n, spectral_norm(b));
  return n;
}

// C*-norm distance.
inline double distance(const AlgebraElement& a, const AlgebraElement& b) {
  return norm(a - b);
}

inline double positivity_epsilon(double scale, const Tolerances& tol) {
  return tol.positivity * (1.0 + scale);
}

inline bool is_hermitian(const AlgebraElement& a, const Tolerances& tol = {}) {
  const double eps = positivity_epsilon(norm(a), tol);
  for (const auto& b : a.blocks())
    if (hermitian_defect(b) > eps) return false;
  return true;
}

// Smallest eigenvalue over the blocks of (a + a*)/2.
inline double min_eigenvalue(const AlgebraElement& a, double jacobi_tol = 1e-13) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : a.blocks()) m = std::min(m, hermitian_eigenvalues(b, jacobi_tol)(0));
  return m;
}

// a >= 0: every block Hermitian with eigenvalues >= -eps_pos.
inline bool is_positive(const AlgebraElement& a, const Tolerances& tol = {}) {
  if (!is_hermitian(a, tol)) return false;
  return min_eigenvalue(a, tol.jacobi) >= -positivity_epsilon(norm(a), tol);
}

inline bool leq(const AlgebraElement& a, const AlgebraElement& b, const Tolerances& tol = {}) {
  require_same_shape(a.shape(), b.shape(), "alg_leq");
  return is_positive(b - a, tol);
}

// Positive square root via the Hermitian eigendecomposition of each block.
// Eigenvalues within the positivity tolerance of zero are clamped.
inline AlgebraElement positive_sqrt(const AlgebraElement& a, const Tolerances& tol = {}) {
  if (!is_positive(a, tol)) throw not_positive_error("alg_sqrt: element is not positive");
  std::vector<CMatrix> out;
  for (const auto& b : a.blocks()) {
    auto eig = jacobi_eigh(b, true, tol.jacobi);
    RVector r = eig.values.cwiseMax(0.0).cwiseSqrt();
    out.push_back(eig.vectors * r.cast<cplx>().asDiagonal() * eig.vectors.adjoint());
  }
  return {a.shape(), std::move(out)};
}

// Inverse; singular when some block has a singular value <= eps_inv = tol * |a|.
inline AlgebraElement inverse(const AlgebraElement& a, const Tolerances& tol = {}) {
  const double eps = tol.invertibility * norm(a);
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    const auto& b = a.block(i);
    if (!(min_singular_value(b) > eps)) {
      throw singular_error("alg_inv: block " + std::to_string(i) + " is singular");
    }
    out.push_back(b.partialPivLu().inverse());
  }
  return {a.shape(), std::move(out)};
}

// Z(A) for a direct sum of full matrix algebras: blockwise scalar matrices.
inline bool in_center(const AlgebraElement& a, const Tolerances& tol = {}) {
  const double eps = positivity_epsilon(norm(a), tol);
  for (const auto& b : a.blocks()) {
    const cplx mean = b.trace() / static_cast<double>(b.rows());
    CMatrix dev = b - mean * CMatrix::Identity(b.rows(), b.cols());
    if (dev.norm() > eps) return false;
  }
  return true;
}

// Block-diagonal embedding into M_{sum d_i}(C), a faithful *-representation.
inline CMatrix block_diagonal(const AlgebraElement& a) {
  int n = 0;
  for (int d : a.shape().dims()) n += d;
  CMatrix out = CMatrix::Zero(n, n);
  int off = 0;
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    int d = a.shape().dim(i);
    out.block(off, off, d, d) = a.block(i);
    off += d;
  }
  return out;
}

}  // namespace cstar
