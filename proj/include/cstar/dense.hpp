#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "cstar/errors.hpp"

namespace cstar {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns; empty unless requested
};

namespace detail {

inline double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

// Cyclic Jacobi eigendecomposition of a Hermitian matrix. The input is
// symmetrized as (a + a^H)/2 first. Sweeps stop once the off-diagonal
// Frobenius mass drops below rel_tol * |a|_F.
//
// Each rotation J zeroes the (p, q) entry: a phase on column q makes
// a_pq real, then the classical real rotation (c, s) eliminates it.
inline HermitianEigen jacobi_eigh(const CMatrix& input, bool want_vectors = true,
                                  double rel_tol = 1e-13, int max_sweeps = 100) {
  if (input.rows() != input.cols()) {
    throw shape_error("jacobi_eigh: matrix must be square");
  }
  const Eigen::Index n = input.rows();
  CMatrix a = (input + input.adjoint()) * 0.5;
  CMatrix v;
  if (want_vectors) v = CMatrix::Identity(n, n);

  const double scale = a.norm();
  const double target = rel_tol * scale;

  int sweep = 0;
  while (n > 1 && scale > 0.0 && detail::off_diagonal_norm(a) > target) {
    if (++sweep > max_sweeps) {
      throw convergence_error("jacobi_eigh: no convergence after " +
                              std::to_string(max_sweeps) + " sweeps");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip entries already negligible next to both diagonals.
        if (sweep > 4 && mag < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const cplx phase = apq / mag;
        const cplx cphase = std::conj(phase);
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Columns: A <- A J, J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - s * cphase * akq;
          a(k, q) = s * akp + c * cphase * akq;
        }
        // Rows: A <- J^H A.
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (want_vectors) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const cplx vkp = v(k, p);
            const cplx vkq = v(k, q);
            v(k, p) = c * vkp - s * cphase * vkq;
            v(k, q) = s * vkp + c * cphase * vkq;
          }
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
    return a(i, i).real() < a(j, j).real();
  });

  HermitianEigen out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto src = order[static_cast<std::size_t>(i)];
    out.values(i) = a(src, src).real();
    if (want_vectors) out.vectors.col(i) = v.col(src);
  }
  return out;
}

inline RVector hermitian_eigenvalues(const CMatrix& a, double rel_tol = 1e-13) {
  return jacobi_eigh(a, false, rel_tol).values;
}

// Singular values in descending order, min(rows, cols) of them, taken from
// the top of the spectrum of the Hermitian dilation [[0, a], [a^H, 0]].
// Eigenvalue error in Jacobi is absolute in |a|, so small singular values
// keep full absolute accuracy (unlike the route through a^H a).
inline RVector singular_values(const CMatrix& a, double rel_tol = 1e-13) {
  const Eigen::Index r = a.rows(), c = a.cols();
  const Eigen::Index m = std::min(r, c);
  RVector out(m);
  if (m == 0) return out;
  CMatrix h = CMatrix::Zero(r + c, r + c);
  h.topRightCorner(r, c) = a;
  h.bottomLeftCorner(c, r) = a.adjoint();
  RVector ev = hermitian_eigenvalues(h, rel_tol);
  for (Eigen::Index i = 0; i < m; ++i) {
    out(i) = std::max(0.0, ev(r + c - 1 - i));
  }
  return out;
}

inline double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

inline double min_singular_value(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  RVector s = singular_values(a);
  return s(s.size() - 1);
}

// Number of singular values above rel_tol * largest.
inline Eigen::Index numerical_rank(const CMatrix& a, double rel_tol = 1e-10) {
  if (a.size() == 0) return 0;
  RVector s = singular_values(a);
  if (s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

// Frobenius norm of a - a^H (an upper bound for its spectral norm).
inline double hermitian_defect(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).norm();
}

}  // namespace cstar
