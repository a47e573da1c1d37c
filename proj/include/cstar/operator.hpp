#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cstar/module.hpp"

namespace cstar {

// Adjointable A-linear map T: A^k -> A^k'.
//
// Left A-linearity T(a.x) = a.T(x) forces the coefficients to act from the
// right: (Tx)_j = sum_i x_i c_{ji}. This is the single place where that
// convention lives. Per algebra block the operator is the (d k) x (d k')
// complex matrix t_i whose (i, j) d x d block is c_{ji}, and application
// is X -> X t_i on the row form of ModuleVector. Consequently
//   adjoint     t_i -> t_i^H
//   T o R       t_i -> r_i t_i
// and L(A^k) is the direct sum of the M_{d_i k}(C).
class ModuleOperator {
 public:
  ModuleOperator() : ModuleOperator(zero(AlgebraShape::scalar(), 1, 1)) {}

  ModuleOperator(AlgebraShape shape, int domain_rank, int codomain_rank,
                 std::vector<CMatrix> blocks)
      : shape_(std::move(shape)),
        domain_rank_(domain_rank),
        codomain_rank_(codomain_rank),
        blocks_(std::move(blocks)) {
    if (domain_rank_ < 0 || codomain_rank_ < 0) throw shape_error("ModuleOperator: negative rank");
    if (blocks_.size() != shape_.num_blocks()) {
      throw shape_error("ModuleOperator: block count does not match shape");
    }
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const int d = shape_.dim(i);
      if (blocks_[i].rows() != d * domain_rank_ || blocks_[i].cols() != d * codomain_rank_) {
        throw shape_error("ModuleOperator: block " + std::to_string(i) + " has wrong size");
      }
    }
  }

  static ModuleOperator zero(const AlgebraShape& shape, int domain_rank, int codomain_rank) {
    std::vector<CMatrix> b;
    for (int d : shape.dims()) b.push_back(CMatrix::Zero(d * domain_rank, d * codomain_rank));
    return {shape, domain_rank, codomain_rank, std::move(b)};
  }

  static ModuleOperator identity(const AlgebraShape& shape, int rank) {
    std::vector<CMatrix> b;
    for (int d : shape.dims()) b.push_back(CMatrix::Identity(d * rank, d * rank));
    return {shape, rank, rank, std::move(b)};
  }

  // Builds T from its coefficient matrix: entries[j][i] = c_{ji}, so
  // (Tx)_j = sum_i x_i c_{ji}; entries has codomain_rank rows.
  static ModuleOperator from_entries(const AlgebraShape& shape, int domain_rank,
                                     const std::vector<std::vector<AlgebraElement>>& entries) {
    const int codomain_rank = static_cast<int>(entries.size());
    auto t = zero(shape, domain_rank, codomain_rank);
    for (int j = 0; j < codomain_rank; ++j) {
      const auto& row = entries[static_cast<std::size_t>(j)];
      if (static_cast<int>(row.size()) != domain_rank) {
        throw shape_error("ModuleOperator::from_entries: ragged coefficient matrix");
      }
      for (int i = 0; i < domain_rank; ++i) t.set_entry(j, i, row[static_cast<std::size_t>(i)]);
    }
    return t;
  }

  // Diagonal operator a_n -> a_n m_n. A-linear for any m_n; it matches
  // the left multiplication m_n a_n exactly when every m_n is central.
  static ModuleOperator diagonal(const AlgebraShape& shape, const std::vector<AlgebraElement>& m) {
    const int n = static_cast<int>(m.size());
    auto t = zero(shape, n, n);
    for (int j = 0; j < n; ++j) t.set_entry(j, j, m[static_cast<std::size_t>(j)]);
    return t;
  }

  const AlgebraShape& shape() const { return shape_; }
  int domain_rank() const { return domain_rank_; }
  int codomain_rank() const { return codomain_rank_; }
  bool is_square() const { return domain_rank_ == codomain_rank_; }
  const CMatrix& block(std::size_t i) const { return blocks_.at(i); }
  CMatrix& block(std::size_t i) { return blocks_.at(i); }

  AlgebraElement entry(int j, int i) const {
    check_entry(j, i);
    std::vector<CMatrix> b;
    for (std::size_t blk = 0; blk < blocks_.size(); ++blk) {
      const int d = shape_.dim(blk);
      b.push_back(blocks_[blk].block(i * d, j * d, d, d));
    }
    return {shape_, std::move(b)};
  }

  void set_entry(int j, int i, const AlgebraElement& c) {
    check_entry(j, i);
    require_same_shape(shape_, c.shape(), "ModuleOperator::set_entry");
    for (std::size_t blk = 0; blk < blocks_.size(); ++blk) {
      const int d = shape_.dim(blk);
      blocks_[blk].block(i * d, j * d, d, d) = c.block(blk);
    }
  }

  ModuleVector apply(const ModuleVector& x) const {
    require_same_shape(shape_, x.shape(), "op_apply");
    if (x.rank() != domain_rank_) {
      throw shape_error("op_apply: vector rank " + std::to_string(x.rank()) +
                        " does not match domain rank " + std::to_string(domain_rank_));
    }
    std::vector<CMatrix> rows;
    for (std::size_t i = 0; i < blocks_.size(); ++i) rows.push_back(x.block(i) * blocks_[i]);
    return {shape_, codomain_rank_, std::move(rows)};
  }

  ModuleVector operator()(const ModuleVector& x) const { return apply(x); }

  ModuleOperator& operator+=(const ModuleOperator& o) {
    require_same_dims(o, "op_add");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += o.blocks_[i];
    return *this;
  }
  ModuleOperator& operator-=(const ModuleOperator& o) {
    require_same_dims(o, "op_sub");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= o.blocks_[i];
    return *this;
  }
  ModuleOperator& operator*=(cplx z) {
    for (auto& b : blocks_) b *= z;
    return *this;
  }

  friend ModuleOperator operator+(ModuleOperator a, const ModuleOperator& b) { return a += b; }
  friend ModuleOperator operator-(ModuleOperator a, const ModuleOperator& b) { return a -= b; }
  friend ModuleOperator operator*(cplx z, ModuleOperator a) { return a *= z; }

  void require_same_dims(const ModuleOperator& o, const char* where) const {
    require_same_shape(shape_, o.shape_, where);
    if (domain_rank_ != o.domain_rank_ || codomain_rank_ != o.codomain_rank_) {
      throw shape_error(std::string(where) + ": operator dimension mismatch");
    }
  }

 private:
  void check_entry(int j, int i) const {
    if (j < 0 || j >= codomain_rank_ || i < 0 || i >= domain_rank_) {
      throw shape_error("ModuleOperator: entry index out of range");
    }
  }

  AlgebraShape shape_;
  int domain_rank_;
  int codomain_rank_;
  std::vector<CMatrix> blocks_;
};

inline ModuleVector op_apply(const ModuleOperator& t, const ModuleVector& x) { return t.apply(x); }

// T o R: apply R first.
inline ModuleOperator compose(const ModuleOperator& t, const ModuleOperator& r) {
  require_same_shape(t.shape(), r.shape(), "op_compose");
  if (r.codomain_rank() != t.domain_rank()) {
    throw shape_error("op_compose: codomain of right factor (" + std::to_string(r.codomain_rank()) +
                      ") does not match domain of left factor (" + std::to_string(t.domain_rank()) + ")");
  }
  std::vector<CMatrix> b;
  for (std::size_t i = 0; i < t.shape().num_blocks(); ++i) b.push_back(r.block(i) * t.block(i));
  return {t.shape(), r.domain_rank(), t.codomain_rank(), std::move(b)};
}

inline ModuleOperator operator*(const ModuleOperator& t, const ModuleOperator& r) { return compose(t, r); }

inline ModuleOperator adjoint(const ModuleOperator& t) {
  std::vector<CMatrix> b;
  for (std::size_t i = 0; i < t.shape().num_blocks(); ++i) b.push_back(t.block(i).adjoint());
  return {t.shape(), t.codomain_rank(), t.domain_rank(), std::move(b)};
}

// Elementary operator z -> <z, x> y.
inline ModuleOperator theta(const ModuleVector& x, const ModuleVector& y) {
  require_same_shape(x.shape(), y.shape(), "theta");
  std::vector<CMatrix> b;
  for (std::size_t i = 0; i < x.shape().num_blocks(); ++i) b.push_back(x.block(i).adjoint() * y.block(i));
  return {x.shape(), x.rank(), y.rank(), std::move(b)};
}

// Dense matrix R(T) on realize_vector coordinates: realize(Tx) = R(T) realize(x).
// Row-stacking X turns X -> X t into blockdiag(I_d (x) t^T).
inline CMatrix complex_realization(const ModuleOperator& t) {
  Eigen::Index rows = 0, cols = 0;
  for (std::size_t i = 0; i < t.shape().num_blocks(); ++i) {
    const int d = t.shape().dim(i);
    rows += d * t.block(i).cols();
    cols += d * t.block(i).rows();
  }
  CMatrix r = CMatrix::Zero(rows, cols);
  Eigen::Index ro = 0, co = 0;
  for (std::size_t i = 0; i < t.shape().num_blocks(); ++i) {
    const int d = t.shape().dim(i);
    const CMatrix tt = t.block(i).transpose();
    for (int k = 0; k < d; ++k) {
      r.block(ro, co, tt.rows(), tt.cols()) = tt;
      ro += tt.rows();
      co += tt.cols();
    }
  }
  return r;
}

inline double op_norm(const ModuleOperator& t) {
  double n = 0.0;
  for (std::size_t i = 0; i < t.shape().num_blocks(); ++i) n = std::max(n, spectral_norm(t.block(i)));
  return n;
}

// Smallest singular value of the realization. For a non-square operator
// this is the lower bound |Tx| >= s |x| when k <= k', and 0 is never
// reported merely because of the shape.
inline double op_min_sv(const ModuleOperator& t) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.shape().num_blocks(); ++i) m = std::min(m, min_singular_value(t.block(i)));
  return m;
}

inline bool op_is_invertible(const ModuleOperator& t, const Tolerances& tol = {}) {
  if (!t.is_square()) return false;
  return op_min_sv(t) > tol.invertibility * op_norm(t);
}

inline ModuleOperator op_invert(const ModuleOperator& t, const Tolerances& tol = {}) {
  if (!t.is_square()) {
    throw singular_error("op_invert: operator A^" + std::to_string(t.domain_rank()) + " -> A^" +
                         std::to_string(t.codomain_rank()) + " is not square");
  }
  if (!op_is_invertible(t, tol)) throw singular_error("op_invert: operator is singular");
  std::vector<CMatrix> b;
  for (std::size_t i = 0; i < t.shape().num_blocks(); ++i) b.push_back(t.block(i).partialPivLu().inverse());
  return {t.shape(), t.domain_rank(), t.codomain_rank(), std::move(b)};
}

inline double self_adjoint_defect(const ModuleOperator& t) {
  if (!t.is_square()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < t.shape().num_blocks(); ++i) d = std::max(d, hermitian_defect(t.block(i)));
  return d;
}

inline bool is_self_adjoint(const ModuleOperator& t, const Tolerances& tol = {}) {
  return t.is_square() && self_adjoint_defect(t) <= positivity_epsilon(op_norm(t), tol);
}

struct SpectralBounds {
  double lower;
  double upper;
};

// Extreme eigenvalues of a self-adjoint operator.
inline SpectralBounds spectral_bounds(const ModuleOperator& t, const Tolerances& tol = {}) {
  if (!is_self_adjoint(t, tol)) throw domain_error("spectral_bounds: operator is not self-adjoint");
  SpectralBounds s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < t.shape().num_blocks(); ++i) {
    if (t.block(i).size() == 0) continue;
    RVector ev = hermitian_eigenvalues(t.block(i), tol.jacobi);
    s.lower = std::min(s.lower, ev(0));
    s.upper = std::max(s.upper, ev(ev.size() - 1));
  }
  return s;
}

inline bool op_positive(const ModuleOperator& t, const Tolerances& tol = {}) {
  if (!is_self_adjoint(t, tol)) return false;
  return spectral_bounds(t, tol).lower >= -positivity_epsilon(op_norm(t), tol);
}

// Complex rank of the realization.
inline Eigen::Index complex_rank(const ModuleOperator& t, double rel_tol = 1e-10) {
  const double scale = op_norm(t);
  if (scale == 0.0) return 0;
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < t.shape().num_blocks(); ++i) {
    RVector s = singular_values(t.block(i));
    Eigen::Index bi = 0;
    for (Eigen::Index j = 0; j < s.size(); ++j)
      if (s(j) > rel_tol * scale) ++bi;
    r += bi * t.shape().dim(i);
  }
  return r;
}

struct ElementaryPair {
  ModuleVector x;
  ModuleVector y;
};

// T = sum_j theta(x_j, y_j) with the fewest terms this construction gives.
// Per block, t = W V^H with V the eigenvectors of t^H t and W = t V; the
// retained columns are grouped d_i at a time into the rows of X_j and Y_j.
// The term count is max_i ceil(rank_i / d_i), the A-rank of T.
inline std::vector<ElementaryPair> finite_rank_decompose(const ModuleOperator& t,
                                                         double rel_tol = 1e-12) {
  const auto& shape = t.shape();
  const double scale = op_norm(t);
  std::vector<CMatrix> w_cols(shape.num_blocks()), v_cols(shape.num_blocks());
  std::size_t terms = 0;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const CMatrix& b = t.block(i);
    const int d = shape.dim(i);
    if (scale == 0.0 || b.size() == 0) {
      w_cols[i] = CMatrix(b.rows(), 0);
      v_cols[i] = CMatrix(b.cols(), 0);
      continue;
    }
    auto eig = jacobi_eigh(b.adjoint() * b, true);
    CMatrix w = b * eig.vectors;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = w.cols() - 1; c >= 0; --c)
      if (w.col(c).norm() > rel_tol * scale) keep.push_back(c);
    w_cols[i].resize(b.rows(), static_cast<Eigen::Index>(keep.size()));
    v_cols[i].resize(b.cols(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      w_cols[i].col(static_cast<Eigen::Index>(c)) = w.col(keep[c]);
      v_cols[i].col(static_cast<Eigen::Index>(c)) = eig.vectors.col(keep[c]);
    }
    terms = std::max(terms, (keep.size() + static_cast<std::size_t>(d) - 1) / static_cast<std::size_t>(d));
  }

  std::vector<ElementaryPair> out;
  for (std::size_t j = 0; j < terms; ++j) {
    auto x = ModuleVector::zero(shape, t.domain_rank());
    auto y = ModuleVector::zero(shape, t.codomain_rank());
    for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
      const int d = shape.dim(i);
      for (int r = 0; r < d; ++r) {
        const Eigen::Index c = static_cast<Eigen::Index>(j) * d + r;
        if (c >= w_cols[i].cols()) break;
        x.block(i).row(r) = w_cols[i].col(c).adjoint();
        y.block(i).row(r) = v_cols[i].col(c).adjoint();
      }
    }
    out.push_back({std::move(x), std::move(y)});
  }
  return out;
}

inline ModuleOperator sum_of_thetas(const std::vector<ElementaryPair>& pairs, const AlgebraShape& shape,
                                    int domain_rank, int codomain_rank) {
  auto t = ModuleOperator::zero(shape, domain_rank, codomain_rank);
  for (const auto& p : pairs) t += theta(p.x, p.y);
  return t;
}

}  // namespace cstar
