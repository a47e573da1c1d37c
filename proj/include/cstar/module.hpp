#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cstar/algebra.hpp"

namespace cstar {

// An element x = (x_1, ..., x_k) of the free Hilbert A-module A^k.
//
// Storage is per algebra block: block i holds the d_i x (d_i k) matrix
// [x_1 | x_2 | ... | x_k] of the i-th components. In that form the module
// action is a left matrix product, a.x -> a_i X_i, and the A-valued inner
// product is <x, y> = sum_j x_j y_j^* = X_i Y_i^H blockwise.
class ModuleVector {
 public:
  ModuleVector() : ModuleVector(zero(AlgebraShape::scalar(), 1)) {}

  ModuleVector(AlgebraShape shape, int rank, std::vector<CMatrix> rows)
      : shape_(std::move(shape)), rank_(rank), rows_(std::move(rows)) {
    if (rank_ < 0) throw shape_error("ModuleVector: negative rank");
    if (rows_.size() != shape_.num_blocks()) {
      throw shape_error("ModuleVector: block count does not match shape");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const int d = shape_.dim(i);
      if (rows_[i].rows() != d || rows_[i].cols() != d * rank_) {
        throw shape_error("ModuleVector: block " + std::to_string(i) + " has wrong size");
      }
    }
  }

  static ModuleVector zero(const AlgebraShape& shape, int rank) {
    std::vector<CMatrix> rows;
    for (int d : shape.dims()) rows.push_back(CMatrix::Zero(d, d * rank));
    return {shape, rank, std::move(rows)};
  }

  static ModuleVector from_coords(const AlgebraShape& shape,
                                  const std::vector<AlgebraElement>& coords) {
    const int k = static_cast<int>(coords.size());
    ModuleVector x = zero(shape, k);
    for (int j = 0; j < k; ++j) x.set_coord(j, coords[static_cast<std::size_t>(j)]);
    return x;
  }

  const AlgebraShape& shape() const { return shape_; }
  int rank() const { return rank_; }
  const CMatrix& block(std::size_t i) const { return rows_.at(i); }
  CMatrix& block(std::size_t i) { return rows_.at(i); }

  AlgebraElement coord(int j) const {
    check_index(j);
    std::vector<CMatrix> b;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const int d = shape_.dim(i);
      b.push_back(rows_[i].middleCols(j * d, d));
    }
    return {shape_, std::move(b)};
  }

  void set_coord(int j, const AlgebraElement& a) {
    check_index(j);
    require_same_shape(shape_, a.shape(), "ModuleVector::set_coord");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const int d = shape_.dim(i);
      rows_[i].middleCols(j * d, d) = a.block(i);
    }
  }

  std::vector<AlgebraElement> coords() const {
    std::vector<AlgebraElement> out;
    for (int j = 0; j < rank_; ++j) out.push_back(coord(j));
    return out;
  }

  ModuleVector& operator+=(const ModuleVector& o) {
    require_compatible(o, "module_add");
    for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] += o.rows_[i];
    return *this;
  }
  ModuleVector& operator-=(const ModuleVector& o) {
    require_compatible(o, "module_sub");
    for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] -= o.rows_[i];
    return *this;
  }
  ModuleVector& operator*=(cplx z) {
    for (auto& r : rows_) r *= z;
    return *this;
  }

  friend ModuleVector operator+(ModuleVector a, const ModuleVector& b) { return a += b; }
  friend ModuleVector operator-(ModuleVector a, const ModuleVector& b) { return a -= b; }
  friend ModuleVector operator*(cplx z, ModuleVector a) { return a *= z; }

  void require_compatible(const ModuleVector& o, const char* where) const {
    require_same_shape(shape_, o.shape_, where);
    if (rank_ != o.rank_) {
      throw shape_error(std::string(where) + ": rank mismatch " + std::to_string(rank_) +
                        " vs " + std::to_string(o.rank_));
    }
  }

 private:
  void check_index(int j) const {
    if (j < 0 || j >= rank_) throw shape_error("ModuleVector: coordinate out of range");
  }

  AlgebraShape shape_;
  int rank_;
  std::vector<CMatrix> rows_;
};

// <x, y> = sum_j x_j y_j^*.
inline AlgebraElement inner_product(const ModuleVector& x, const ModuleVector& y) {
  x.require_compatible(y, "inner_product");
  std::vector<CMatrix> b;
  for (std::size_t i = 0; i < x.shape().num_blocks(); ++i) {
    b.push_back(x.block(i) * y.block(i).adjoint());
  }
  return {x.shape(), std::move(b)};
}

// Left module action a . x.
inline ModuleVector operator*(const AlgebraElement& a, const ModuleVector& x) {
  require_same_shape(a.shape(), x.shape(), "module_action");
  std::vector<CMatrix> rows;
  for (std::size_t i = 0; i < x.shape().num_blocks(); ++i) rows.push_back(a.block(i) * x.block(i));
  return {x.shape(), x.rank(), std::move(rows)};
}

inline ModuleVector module_action(const AlgebraElement& a, const ModuleVector& x) { return a * x; }

// |x| = |<x, x>|^{1/2}; per block this is the largest singular value of X_i.
inline double norm(const ModuleVector& x) {
  double n = 0.0;
  for (std::size_t i = 0; i < x.shape().num_blocks(); ++i) {
    if (x.block(i).size() == 0) continue;
    n = std::max(n, spectral_norm(x.block(i)));
  }
  return n;
}

inline double distance(const ModuleVector& x, const ModuleVector& y) { return norm(x - y); }

// e_n has 1_A in coordinate n.
inline std::vector<ModuleVector> standard_basis(const AlgebraShape& shape, int n) {
  if (n < 1) throw shape_error("standard_basis: N must be >= 1");
  std::vector<ModuleVector> out;
  const auto one = AlgebraElement::identity(shape);
  for (int j = 0; j < n; ++j) {
    auto e = ModuleVector::zero(shape, n);
    e.set_coord(j, one);
    out.push_back(std::move(e));
  }
  return out;
}

// Coordinates of x in C^{k * sum d_i^2}: the rows of each block matrix,
// stacked block after block.
inline CVector realize_vector(const ModuleVector& x) {
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < x.shape().num_blocks(); ++i) total += x.block(i).size();
  CVector v(total);
  Eigen::Index off = 0;
  for (std::size_t i = 0; i < x.shape().num_blocks(); ++i) {
    const auto& b = x.block(i);
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      v.segment(off, b.cols()) = b.row(r).transpose();
      off += b.cols();
    }
  }
  return v;
}

inline ModuleVector vector_from_realization(const AlgebraShape& shape, int rank, const CVector& v) {
  ModuleVector x = ModuleVector::zero(shape, rank);
  Eigen::Index off = 0;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    auto& b = x.block(i);
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      b.row(r) = v.segment(off, b.cols()).transpose();
      off += b.cols();
    }
  }
  if (off != v.size()) throw shape_error("vector_from_realization: length mismatch");
  return x;
}

}  // namespace cstar
