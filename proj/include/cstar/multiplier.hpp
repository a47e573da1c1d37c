#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cstar/frame.hpp"

namespace cstar {

// m = {m_n} with every m_n in the center of A; acts on A^N as a_n -> m_n a_n.
class DiagonalSymbol {
 public:
  DiagonalSymbol(AlgebraShape shape, std::vector<AlgebraElement> m, const Tolerances& tol = {})
      : shape_(std::move(shape)), m_(std::move(m)) {
    if (m_.empty()) throw shape_error("DiagonalSymbol: empty symbol");
    for (std::size_t n = 0; n < m_.size(); ++n) {
      require_same_shape(shape_, m_[n].shape(), "DiagonalSymbol");
      if (!in_center(m_[n], tol)) {
        throw not_central_error(n, "DiagonalSymbol: entry " + std::to_string(n) + " is not central");
      }
    }
  }

  const AlgebraShape& shape() const { return shape_; }
  int size() const { return static_cast<int>(m_.size()); }
  const std::vector<AlgebraElement>& entries() const { return m_; }

  double sup_norm() const {
    double s = 0.0;
    for (const auto& a : m_) s = std::max(s, norm(a));
    return s;
  }

 private:
  AlgebraShape shape_;
  std::vector<AlgebraElement> m_;
};

inline ModuleOperator diagonal_to_full(const DiagonalSymbol& m) {
  return ModuleOperator::diagonal(m.shape(), m.entries());
}

// Symbol of a multiplier: a full operator on A^N or a central diagonal.
class Symbol {
 public:
  Symbol(ModuleOperator u) : value_(std::move(u)) {  // NOLINT(google-explicit-constructor)
    const auto& op = std::get<ModuleOperator>(value_);
    if (!op.is_square()) throw shape_error("Symbol: operator must act on A^N");
  }
  Symbol(DiagonalSymbol m) : value_(std::move(m)) {}  // NOLINT(google-explicit-constructor)

  bool is_diagonal() const { return std::holds_alternative<DiagonalSymbol>(value_); }
  const DiagonalSymbol& diagonal() const { return std::get<DiagonalSymbol>(value_); }

  ModuleOperator as_operator() const {
    if (is_diagonal()) return diagonal_to_full(diagonal());
    return std::get<ModuleOperator>(value_);
  }

  int size() const {
    return is_diagonal() ? diagonal().size() : std::get<ModuleOperator>(value_).domain_rank();
  }

  const AlgebraShape& shape() const {
    return is_diagonal() ? diagonal().shape() : std::get<ModuleOperator>(value_).shape();
  }

 private:
  std::variant<ModuleOperator, DiagonalSymbol> value_;
};

inline Symbol adjoint(const Symbol& u) {
  if (u.is_diagonal()) {
    std::vector<AlgebraElement> m;
    for (const auto& a : u.diagonal().entries()) m.push_back(adjoint(a));
    return DiagonalSymbol(u.shape(), std::move(m));
  }
  return adjoint(u.as_operator());
}

// Generalized Bessel multiplier M_{U,Y,X} = T_Y^* U T_X: analysis along X,
// symbol U on A^N, synthesis along Y.
class Multiplier {
 public:
  Multiplier(Symbol u, FrameSequence y, FrameSequence x)
      : u_(std::move(u)), y_(std::move(y)), x_(std::move(x)), assembled_(assemble()) {}

  const Symbol& symbol() const { return u_; }
  const FrameSequence& synthesis_side() const { return y_; }
  const FrameSequence& analysis_side() const { return x_; }
  const ModuleOperator& assembled() const { return assembled_; }

  // Applied factor by factor, without the assembled operator.
  ModuleVector apply(const ModuleVector& v) const {
    auto coeffs = x_.analysis_operator().apply(v);
    coeffs = u_.as_operator().apply(coeffs);
    return y_.synthesis_operator().apply(coeffs);
  }

 private:
  ModuleOperator assemble() const {
    require_same_shape(x_.shape(), y_.shape(), "multiplier");
    require_same_shape(x_.shape(), u_.shape(), "multiplier");
    if (x_.size() != y_.size()) {
      throw shape_error("multiplier: sequence lengths differ (" + std::to_string(x_.size()) + " vs " +
                        std::to_string(y_.size()) + ")");
    }
    if (u_.size() != x_.size()) {
      throw shape_error("multiplier: symbol acts on A^" + std::to_string(u_.size()) +
                        " but sequences have length " + std::to_string(x_.size()));
    }
    return compose(y_.synthesis_operator(), compose(u_.as_operator(), x_.analysis_operator()));
  }

  Symbol u_;
  FrameSequence y_;
  FrameSequence x_;
  ModuleOperator assembled_;
};

inline ModuleVector multiplier_apply(const Multiplier& m, const ModuleVector& x) { return m.apply(x); }
inline const ModuleOperator& multiplier_assemble(const Multiplier& m) { return m.assembled(); }

// M_{U,Y,X}^* = M_{U^*,X,Y}
inline Multiplier multiplier_adjoint(const Multiplier& m) {
  return {adjoint(m.symbol()), m.analysis_side(), m.synthesis_side()};
}

inline bool same_sequence(const FrameSequence& a, const FrameSequence& b, double tol = 0.0) {
  if (a.size() != b.size() || a.rank() != b.rank() || !(a.shape() == b.shape())) return false;
  for (int n = 0; n < a.size(); ++n)
    if (distance(a[n], b[n]) > tol) return false;
  return true;
}

// Positivity of M_{U,X,X}.
inline bool multiplier_positive(const Multiplier& m, const Tolerances& tol = {}) {
  if (!same_sequence(m.synthesis_side(), m.analysis_side())) {
    throw structure_error("multiplier_positive: analysis and synthesis sequences differ");
  }
  return op_positive(m.assembled(), tol);
}

}  // namespace cstar
