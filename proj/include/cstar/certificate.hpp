#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cstar/generators.hpp"
#include "cstar/multiplier.hpp"
#include "cstar/rng.hpp"

namespace cstar {

enum class Verdict { verified, hypothesis_not_met, violation };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "verified";
    case Verdict::hypothesis_not_met: return "hypothesis_not_met";
    case Verdict::violation: return "VIOLATION";
  }
  return "?";
}

// A hypothesis "value <rel> bound". margin > 0 means satisfied with room.
struct Hypothesis {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  std::string relation;  // "<", ">" or "holds"
  double margin = 0.0;
  bool met = false;
  bool near_boundary = false;
};

// A conclusion "value <rel> limit"; the limit already includes tolerance.
// Non-binding conclusions are reported but do not affect the verdict.
struct Conclusion {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // "<=", "<", ">=", ">" or "holds"
  bool pass = false;
  bool binding = true;
};

class Certificate {
 public:
  Certificate() = default;
  Certificate(std::string theorem, std::uint64_t seed, Tolerances tol)
      : theorem(std::move(theorem)), seed(seed), tol_(tol) {}

  std::string theorem;
  std::uint64_t seed = 0;
  std::map<std::string, double> constants;
  std::vector<Hypothesis> hypotheses;
  std::vector<Conclusion> conclusions;
  std::vector<std::string> notes;

  // Strict hypothesis value < bound, with slack margin * |bound|.
  bool require_less(const std::string& name, double value, double bound) {
    Hypothesis h{name, value, bound, "<", bound - value};
    const double slack = tol_.margin * std::abs(bound);
    h.met = std::isfinite(value) && value < bound - slack;
    h.near_boundary = std::abs(h.margin) < tol_.near_boundary * std::abs(bound);
    hypotheses.push_back(h);
    return h.met;
  }

  bool require_greater(const std::string& name, double value, double bound) {
    Hypothesis h{name, value, bound, ">", value - bound};
    const double slack = tol_.margin * std::abs(bound);
    h.met = std::isfinite(value) && value > bound + slack;
    h.near_boundary = std::abs(h.margin) < tol_.near_boundary * std::max(std::abs(bound), std::abs(value));
    hypotheses.push_back(h);
    return h.met;
  }

  bool require(const std::string& name, bool ok) {
    Hypothesis h{name, ok ? 1.0 : 0.0, 1.0, "holds", ok ? 0.0 : -1.0, ok, false};
    hypotheses.push_back(h);
    return ok;
  }

  bool check_le(const std::string& name, double value, double limit, bool binding = true) {
    return add({name, value, limit, "<=", value <= limit, binding});
  }
  bool check_lt(const std::string& name, double value, double limit, bool binding = true) {
    return add({name, value, limit, "<", value < limit, binding});
  }
  bool check_ge(const std::string& name, double value, double limit, bool binding = true) {
    return add({name, value, limit, ">=", value >= limit, binding});
  }
  bool check_gt(const std::string& name, double value, double limit, bool binding = true) {
    return add({name, value, limit, ">", value > limit, binding});
  }
  bool check(const std::string& name, bool ok, bool binding = true) {
    return add({name, ok ? 1.0 : 0.0, 1.0, "holds", ok, binding});
  }

  bool hypothesis_met() const {
    for (const auto& h : hypotheses)
      if (!h.met) return false;
    return true;
  }

  bool conclusions_pass() const {
    for (const auto& c : conclusions)
      if (c.binding && !c.pass) return false;
    return true;
  }

  Verdict verdict() const {
    if (!hypothesis_met()) return Verdict::hypothesis_not_met;
    return conclusions_pass() ? Verdict::verified : Verdict::violation;
  }

  const Conclusion* find_conclusion(const std::string& name) const {
    for (const auto& c : conclusions)
      if (c.name == name) return &c;
    return nullptr;
  }

  const Tolerances& tolerances() const { return tol_; }

 private:
  bool add(Conclusion c) {
    if (!std::isfinite(c.value) && c.relation != "holds") c.pass = false;
    conclusions.push_back(c);
    return c.pass;
  }

  Tolerances tol_;
};

namespace detail {

// Upper limit with relative and absolute (scale) slack.
inline double upper(double bound, double scale, const Tolerances& tol) {
  return bound * (1 + tol.check) + tol.check * 1e-4 * scale;
}

inline double inv_eps(const ModuleOperator& t, const Tolerances& tol) { return tol.invertibility * op_norm(t); }

// Records "<name> invertible" as sigma_min > eps_inv and returns the verdict.
inline bool check_invertible(Certificate& c, const std::string& name, const ModuleOperator& t,
                             const Tolerances& tol, bool binding = true) {
  const double s = t.is_square() ? op_min_sv(t) : 0.0;
  return c.check_gt(name + " invertible", s, inv_eps(t, tol), binding);
}

inline ModuleOperator multiplier_op(const ModuleOperator& u, const FrameSequence& y, const FrameSequence& x) {
  return Multiplier(u, y, x).assembled();
}

inline ModuleOperator identity_like(const FrameSequence& x) { return ModuleOperator::identity(x.shape(), x.rank()); }

}  // namespace detail

// Perturbation of an invertible operator: with lambda = |U - W| below
// 1/|U^-1|, W is invertible and
//   |x| / (lambda + |U|) <= |W^-1 x| <= |x| / (1/|U^-1| - lambda).
// The sandwich is checked on the operator norms and on sampled vectors.
inline Certificate certify_perturbation(const ModuleOperator& u, const ModuleOperator& w, std::uint64_t seed = 0,
                                        const Tolerances& tol = {}, int samples = 200) {
  if (!op_is_invertible(u, tol)) throw singular_error("certify_perturbation: U is not invertible");
  u.require_same_dims(w, "certify_perturbation");
  Certificate c("perturbation", seed, tol);
  const double norm_u = op_norm(u);
  const double norm_uinv = op_norm(op_invert(u, tol));
  const double gamma = 1.0 / norm_uinv;
  const double lambda = op_norm(u - w);
  c.constants = {{"norm_U", norm_u}, {"norm_U_inv", norm_uinv}, {"lambda", lambda}, {"gamma", gamma}};
  if (!c.require_less("lambda < 1/|U^-1|", lambda, gamma)) return c;

  if (!detail::check_invertible(c, "W", w, tol)) return c;
  auto winv = op_invert(w, tol);
  const double lo = 1.0 / (lambda + norm_u);
  const double hi = 1.0 / (gamma - lambda);
  c.constants["lower_factor"] = lo;
  c.constants["upper_factor"] = hi;

  c.check_le("|W^-1| <= 1/(1/|U^-1| - lambda)", op_norm(winv), hi * (1 + tol.check));
  c.check_ge("1/|W| >= 1/(lambda + |U|)", 1.0 / op_norm(w), lo * (1 - tol.check));

  auto rng = CounterRng::stream(seed, {0x5a4d});
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto x = gen::random_vector(u.shape(), u.domain_rank(), rng);
    const double r = norm(winv.apply(x)) / norm(x);
    min_ratio = std::min(min_ratio, r);
    max_ratio = std::max(max_ratio, r);
  }
  c.constants["sampled_min_ratio"] = min_ratio;
  c.constants["sampled_max_ratio"] = max_ratio;
  c.check_ge("sampled |W^-1 x|/|x| >= lower factor", min_ratio, lo * (1 - tol.check));
  c.check_le("sampled |W^-1 x|/|x| <= upper factor", max_ratio, hi * (1 + tol.check));
  return c;
}

// Invertibility of M_{U,Y,X} with X Bessel (bound D) forces the lower frame
// condition on Y in norm form:
//   |sum_n <y, y_n><y_n, y>| >= |y|^2 / (D |U|^2 |M^-1|^2).
inline Certificate certify_lower_frame(const ModuleOperator& u, const FrameSequence& y, const FrameSequence& x,
                                       std::uint64_t seed = 0, const Tolerances& tol = {}, int samples = 500) {
  Certificate c("lower_frame", seed, tol);
  auto m = detail::multiplier_op(u, y, x);
  const double d = x.bounds().upper;
  const double norm_u = op_norm(u);
  c.constants = {{"D_X", d}, {"norm_U", norm_u}, {"norm_M", op_norm(m)}};
  if (!c.require_greater("sigma_min(M_{U,Y,X}) > eps_inv", m.is_square() ? op_min_sv(m) : 0.0,
                         detail::inv_eps(m, tol))) {
    return c;
  }
  const double norm_minv = op_norm(op_invert(m, tol));
  const double lower = 1.0 / (d * norm_u * norm_u * norm_minv * norm_minv);
  c.constants["norm_M_inv"] = norm_minv;
  c.constants["c"] = lower;

  const auto& ty = y.analysis_operator();
  auto rng = CounterRng::stream(seed, {0x3434});
  double inf_ratio = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    auto v = gen::random_vector(y.shape(), y.rank(), rng);
    auto coeffs = ty.apply(v);
    const double lhs = norm(inner_product(coeffs, coeffs));
    const double nv = norm(v);
    inf_ratio = std::min(inf_ratio, lhs / (nv * nv));
  }
  c.constants["sampled_inf_ratio"] = inf_ratio;
  c.constants["lambda_min_S_Y"] = y.bounds().lower;
  c.check_ge("sampled |<T_Y y, T_Y y>|/|y|^2 >= c", inf_ratio, lower * (1 - tol.check));
  c.check_ge("order-form witness lambda_min(S_Y) >= c", y.bounds().lower, lower * (1 - tol.check), false);
  return c;
}

// Frame X with bounds (C, D), a sequence Y close to X in the sense
//   |sum <x, x_n - y_n><x_n - y_n, x>| <= lambda |x|^2,
//   lambda < (1/D) ((C D^2 - C^2 D) / (C^2 + D^2))^2,
// and |U - I| < C^2/D^2. Then Y is a frame and M_{U,X,Y} = T_X^* U T_Y is
// invertible. lambda is the largest eigenvalue of the frame operator of
// {x_n - y_n}. M_{U,Y,X} is checked separately.
inline Certificate certify_sequence_perturbation(const FrameSequence& x, const FrameSequence& y,
                                                 const ModuleOperator& u, const Tolerances& tol = {}) {
  Certificate c("sequence_perturbation", 0, tol);
  if (!c.require("X is a frame", x.is_frame())) return c;
  if (x.size() != y.size()) throw shape_error("certify_sequence_perturbation: sequence lengths differ");
  const double cl = x.bounds().lower;
  const double du = x.bounds().upper;
  const double ratio = (cl * du * du - cl * cl * du) / (cl * cl + du * du);
  const double threshold = ratio * ratio / du;
  auto diff = difference(x, y, tol);
  const double lambda = diff.bounds().upper;
  const auto id_n = ModuleOperator::identity(u.shape(), u.domain_rank());
  const double u_dev = op_norm(u - id_n);
  const double norm_u = op_norm(u);
  c.constants = {{"C", cl}, {"D", du}, {"lambda", lambda}, {"lambda_threshold", threshold},
                 {"norm_U_minus_I", u_dev}, {"norm_U", norm_u}};
  if (threshold == 0.0 || cl == du) {
    c.notes.push_back("tight frame: the admissible range for lambda is empty");
  }
  bool ok = c.require_less("lambda < (1/D)((CD^2-C^2D)/(C^2+D^2))^2", lambda, threshold);
  ok = c.require_less("|U - I| < C^2/D^2", u_dev, cl * cl / (du * du)) && ok;
  ok = c.require_greater("|U| > 0", norm_u, 0.0) && ok;
  if (!ok) return c;

  c.constants["C_Y"] = y.bounds().lower;
  c.constants["D_Y"] = y.bounds().upper;
  c.check("Y is a frame", y.is_frame());
  auto m_xy = detail::multiplier_op(u, x, y);
  auto m_yx = detail::multiplier_op(u, y, x);
  auto m_xx = detail::multiplier_op(u, x, x);
  detail::check_invertible(c, "M_{U,X,Y}", m_xy, tol);
  detail::check_invertible(c, "M_{U,Y,X}", m_yx, tol);
  c.check_le("|M_{U,X,X} - S_X| <= D|U - I|", op_norm(m_xx - x.frame_operator()),
             detail::upper(du * u_dev, du, tol));
  if (detail::check_invertible(c, "M_{U,X,X}", m_xx, tol)) {
    const double inv_norm = op_norm(op_invert(m_xx, tol));
    c.constants["norm_M_UXX_inv"] = inv_norm;
    c.check_lt("|U| sqrt(D lambda) < 1/|M_{U,X,X}^-1|", norm_u * std::sqrt(du * lambda),
               (1.0 / inv_norm) * (1 + tol.check));
  }
  return c;
}

// Y a frame with bounds (C, D), W invertible, X = {W y_n}, |U - I| < C/D.
// Then X is a frame, M_{U,Y,X} and M_{U,X,Y} are invertible and
//   M_{U,Y,X}^-1 = (W^-1)^* M_{U,Y,Y}^-1,   M_{U,X,Y}^-1 = M_{U,Y,Y}^-1 W^-1.
inline Certificate certify_frame_image(const FrameSequence& y, const ModuleOperator& w, const ModuleOperator& u,
                                       const Tolerances& tol = {}) {
  if (!op_is_invertible(w, tol)) throw singular_error("certify_frame_image: W is not invertible");
  Certificate c("frame_image", 0, tol);
  if (!c.require("Y is a frame", y.is_frame())) return c;
  const double cl = y.bounds().lower;
  const double du = y.bounds().upper;
  const auto id_n = ModuleOperator::identity(u.shape(), u.domain_rank());
  const double u_dev = op_norm(u - id_n);
  c.constants = {{"C", cl}, {"D", du}, {"norm_U_minus_I", u_dev}, {"norm_W", op_norm(w)}};
  if (!c.require_less("|U - I| < C/D", u_dev, cl / du)) return c;

  auto x = image(w, y, tol);
  c.constants["C_X"] = x.bounds().lower;
  c.constants["D_X"] = x.bounds().upper;
  c.check("X = {W y_n} is a frame", x.is_frame());

  auto m_yy = detail::multiplier_op(u, y, y);
  const double dev_yy = op_norm(m_yy - y.frame_operator());
  c.check_le("|M_{U,Y,Y} - S_Y| <= D|U - I|", dev_yy, detail::upper(du * u_dev, du, tol));
  c.check_lt("|M_{U,Y,Y} - S_Y| < C", dev_yy, cl);
  auto m_yx = detail::multiplier_op(u, y, x);
  auto m_xy = detail::multiplier_op(u, x, y);
  const bool inv_yx = detail::check_invertible(c, "M_{U,Y,X}", m_yx, tol);
  const bool inv_xy = detail::check_invertible(c, "M_{U,X,Y}", m_xy, tol);
  if (!detail::check_invertible(c, "M_{U,Y,Y}", m_yy, tol)) return c;

  const auto id = detail::identity_like(y);
  auto m_yy_inv = op_invert(m_yy, tol);
  auto winv = op_invert(w, tol);
  if (inv_yx) {
    auto formula = compose(adjoint(winv), m_yy_inv);
    const double r = std::max(op_norm(compose(m_yx, formula) - id), op_norm(compose(formula, m_yx) - id));
    c.check_le("M_{U,Y,X}^-1 = (W^-1)^* M_{U,Y,Y}^-1 residual", r, tol.check);
  }
  if (inv_xy) {
    auto formula = compose(m_yy_inv, winv);
    const double r = std::max(op_norm(compose(m_xy, formula) - id), op_norm(compose(formula, m_xy) - id));
    c.check_le("M_{U,X,Y}^-1 = M_{U,Y,Y}^-1 W^-1 residual", r, tol.check);
  }
  return c;
}

// X a frame with upper bound D and X^d a dual frame; |U - I| < 1/(2D)
// should make M_{U,X,X^d} = T_X^* U T_{X^d} and M_{U,X^d,X} invertible
// through the contraction |M_{U,X,X^d} - Id| <= D |U - I| < 1/2.
// The bound actually available is sqrt(D D^d) |U - I| with D^d the upper
// bound of X^d; both are reported.
inline Certificate certify_dual_multiplier(const FrameSequence& x, const FrameSequence& xd, const ModuleOperator& u,
                                           const Tolerances& tol = {}) {
  if (!is_dual_pair(x, xd, 1e-9)) throw structure_error("certify_dual_multiplier: (X, X^d) is not a dual pair");
  Certificate c("dual_multiplier", 0, tol);
  const double du = x.bounds().upper;
  const double dd = xd.bounds().upper;
  const auto id_n = ModuleOperator::identity(u.shape(), u.domain_rank());
  const double u_dev = op_norm(u - id_n);
  c.constants = {{"D", du}, {"D_dual", dd}, {"norm_U_minus_I", u_dev},
                 {"dual_pair_residual", dual_pair_residual(x, xd)}};
  if (dd > du) c.notes.push_back("dual upper bound exceeds D; contraction step relies on sqrt(D D_dual)");
  if (!c.require_less("|U - I| < 1/(2D)", u_dev, 1.0 / (2.0 * du))) return c;

  auto m = detail::multiplier_op(u, x, xd);
  auto m_rev = detail::multiplier_op(u, xd, x);
  const double contraction = op_norm(m - detail::identity_like(x));
  c.constants["norm_M_minus_I"] = contraction;
  c.constants["sqrt_D_Ddual_times_dev"] = std::sqrt(du * dd) * u_dev;
  detail::check_invertible(c, "M_{U,X,X^d}", m, tol);
  detail::check_invertible(c, "M_{U,X^d,X}", m_rev, tol);
  c.check_le("|M_{U,X,X^d} - Id| <= D|U - I|", contraction, detail::upper(du * u_dev, 1.0, tol));
  c.check_lt("|M_{U,X,X^d} - Id| < 1/2", contraction, 0.5);
  c.check_le("|M_{U,X,X^d} - Id| <= sqrt(D D_dual)|U - I|", contraction,
             detail::upper(std::sqrt(du * dd) * u_dev, 1.0, tol), false);
  // With D read as a common upper bound of X and X^d the contraction holds.
  const double dmax = std::max(du, dd);
  c.constants["D_common"] = dmax;
  c.check("|U - I| < 1/(2 D_common) gives |M_{U,X,X^d} - Id| < 1/2",
          !(u_dev < 1.0 / (2.0 * dmax)) || contraction < 0.5, false);
  return c;
}

// Y a frame with bounds (C, D) and canonical dual {y~_n}, X a Bessel sequence with
//   sigma = sum_n |x_n - y~_n|^2 < 1/(4D).
// Then M_{I,Y,X} is invertible (|M_{I,Y,X} - Id| < 1/2). With a symbol U,
// |U| < 1 and |U - I| < sqrt(C/(4D)) make M_{U,Y,X} invertible as well.
inline Certificate certify_near_dual(const FrameSequence& y, const FrameSequence& x,
                                     const std::optional<ModuleOperator>& u = std::nullopt,
                                     const Tolerances& tol = {}) {
  Certificate c("near_dual", 0, tol);
  if (!c.require("Y is a frame", y.is_frame())) return c;
  if (x.size() != y.size()) throw shape_error("certify_near_dual: sequence lengths differ");
  const double cl = y.bounds().lower;
  const double du = y.bounds().upper;
  auto ydual = canonical_dual(y, tol);
  double sigma = 0.0;
  for (int n = 0; n < x.size(); ++n) {
    const double e = distance(x[n], ydual[n]);
    sigma += e * e;
  }
  c.constants = {{"C", cl}, {"D", du}, {"sigma", sigma}};
  bool ok = c.require_less("sum |x_n - y~_n|^2 < 1/(4D)", sigma, 1.0 / (4.0 * du));
  double u_dev = 0.0, norm_u = 0.0;
  if (u) {
    const auto id_n = ModuleOperator::identity(u->shape(), u->domain_rank());
    u_dev = op_norm(*u - id_n);
    norm_u = op_norm(*u);
    c.constants["norm_U"] = norm_u;
    c.constants["norm_U_minus_I"] = u_dev;
    ok = c.require_less("|U| < 1", norm_u, 1.0) && ok;
    ok = c.require_less("|U - I| < sqrt(C/(4D))", u_dev, std::sqrt(cl / (4.0 * du))) && ok;
  }
  if (!ok) return c;

  const auto id = detail::identity_like(y);
  const auto id_n = ModuleOperator::identity(y.shape(), y.size());
  auto m1 = detail::multiplier_op(id_n, y, x);
  const double dev1 = op_norm(m1 - id);
  c.constants["norm_M_I_minus_Id"] = dev1;
  detail::check_invertible(c, "M_{I,Y,X}", m1, tol);
  c.check_le("|M_{I,Y,X} - Id| <= sqrt(D sigma)", dev1, detail::upper(std::sqrt(du * sigma), 1.0, tol));
  c.check_lt("|M_{I,Y,X} - Id| < 1/2", dev1, 0.5);
  if (u) {
    auto mu = detail::multiplier_op(*u, y, x);
    const double dev = op_norm(mu - id);
    c.constants["norm_M_U_minus_Id"] = dev;
    detail::check_invertible(c, "M_{U,Y,X}", mu, tol);
    const double bound = std::sqrt(du) * norm_u * std::sqrt(sigma) + std::sqrt(du / cl) * u_dev;
    c.check_le("|M_{U,Y,X} - Id| <= sqrt(D)|U|sqrt(sigma) + sqrt(D/C)|U - I|", dev, detail::upper(bound, 1.0, tol));
    c.check_lt("|M_{U,Y,X} - Id| < 1", dev, 1.0);
  }
  return c;
}

namespace detail {

inline void require_riesz(const FrameSequence& s, const char* name, const char* where, const Tolerances& tol) {
  auto r = is_modular_riesz(s, tol);
  if (!r.is_riesz) throw structure_error(std::string(where) + ": " + name + " is not a modular Riesz basis (" + r.reason + ")");
}

}  // namespace detail

// For modular Riesz bases X, Y the symbol map U -> M_{U,Y,X} is injective:
// U = (T_Y^*)^-1 M_{U,Y,X} T_X^-1, so |U_1 - U_2| <= kappa |M_1 - M_2| with
// kappa = |T_X^-1| |(T_Y^*)^-1|.
inline Certificate certify_riesz_injectivity(const FrameSequence& x, const FrameSequence& y,
                                             const ModuleOperator& u1, const ModuleOperator& u2,
                                             const Tolerances& tol = {}) {
  detail::require_riesz(x, "X", "certify_riesz_injectivity", tol);
  detail::require_riesz(y, "Y", "certify_riesz_injectivity", tol);
  Certificate c("riesz_injectivity", 0, tol);
  auto m1 = detail::multiplier_op(u1, y, x);
  auto m2 = detail::multiplier_op(u2, y, x);
  const double dm = op_norm(m1 - m2);
  const double du = op_norm(u1 - u2);
  const double kappa = 1.0 / (op_min_sv(x.analysis_operator()) * op_min_sv(y.synthesis_operator()));
  const double scale = std::max(op_norm(u1), op_norm(u2));
  c.constants = {{"norm_M1_minus_M2", dm}, {"norm_U1_minus_U2", du}, {"kappa", kappa}};

  c.check_le("|U1 - U2| <= kappa |M1 - M2|", du, kappa * dm * (1 + tol.check) + tol.check * 1e-4 * scale);
  const double eps = tol.check * 1e-4 * std::max(scale, 1.0);
  if (du > eps) c.check_gt("U1 != U2 gives M1 != M2", dm, 0.0);
  else c.check_le("U1 = U2 gives M1 = M2", dm, eps * kappa);

  auto recovered = compose(op_invert(y.synthesis_operator(), tol), compose(m1, op_invert(x.analysis_operator(), tol)));
  const double rec = op_norm(recovered - u1);
  c.constants["recovery_residual"] = rec;
  c.check_le("(T_Y^*)^-1 M_1 T_X^-1 = U_1", rec, tol.check * std::max(1.0, op_norm(u1)));
  return c;
}

// Modular Riesz bases X, Y with bounds (C, D), (C', D'):
//   K sqrt(C C') <= |M_{U,Y,X}| <= sqrt(D D') |U|,  K = max_n |U e_n|.
// The upper bound is binding; the lower bound is reported.
inline Certificate certify_riesz_norm_bounds(const FrameSequence& x, const FrameSequence& y, const ModuleOperator& u,
                                             const Tolerances& tol = {}) {
  detail::require_riesz(x, "X", "certify_riesz_norm_bounds", tol);
  detail::require_riesz(y, "Y", "certify_riesz_norm_bounds", tol);
  Certificate c("riesz_norm_bounds", 0, tol);
  double k = 0.0;
  for (const auto& e : standard_basis(u.shape(), u.domain_rank())) k = std::max(k, norm(u.apply(e)));
  const double cx = x.bounds().lower, dx = x.bounds().upper;
  const double cy = y.bounds().lower, dy = y.bounds().upper;
  const double nm = op_norm(detail::multiplier_op(u, y, x));
  const double nu = op_norm(u);
  const double upper = std::sqrt(dx * dy) * nu;
  const double lower = k * std::sqrt(cx * cy);
  c.constants = {{"C", cx}, {"D", dx}, {"C_prime", cy}, {"D_prime", dy}, {"K", k},
                 {"norm_M", nm}, {"norm_U", nu}, {"upper_bound", upper}, {"lower_bound", lower},
                 {"upper_margin", upper - nm}, {"lower_margin", nm - lower}};
  const double slack = tol.check * std::max(1.0, upper);
  c.check_le("|M| <= sqrt(D D')|U|", nm, upper + slack);
  c.check_ge("|M| >= K sqrt(C C')", nm, lower - slack, false);
  return c;
}

// For modular Riesz bases X, Y: U invertible <=> M_{U,Y,X} invertible, and
// then M_{U,Y,X}^-1 = M_{U^-1, X~, Y~}.
inline Certificate certify_riesz_invertibility(const FrameSequence& x, const FrameSequence& y,
                                               const ModuleOperator& u, const Tolerances& tol = {}) {
  Certificate c("riesz_invertibility", 0, tol);
  auto rx = is_modular_riesz(x, tol);
  auto ry = is_modular_riesz(y, tol);
  bool ok = c.require("X is a modular Riesz basis", rx.is_riesz);
  ok = c.require("Y is a modular Riesz basis", ry.is_riesz) && ok;
  if (!rx.is_riesz) c.notes.push_back("X: " + rx.reason);
  if (!ry.is_riesz) c.notes.push_back("Y: " + ry.reason);
  if (!ok) return c;

  auto m = detail::multiplier_op(u, y, x);
  const double su = op_min_sv(u), sm = op_min_sv(m);
  const bool u_inv = su > detail::inv_eps(u, tol);
  const bool m_inv = sm > detail::inv_eps(m, tol);
  c.constants = {{"sigma_min_U", su}, {"sigma_min_M", sm}, {"norm_U", op_norm(u)}, {"norm_M", op_norm(m)},
                 {"U_invertible", u_inv ? 1.0 : 0.0}, {"M_invertible", m_inv ? 1.0 : 0.0}};
  c.check("U invertible => M invertible", !u_inv || m_inv);
  c.check("M invertible => U invertible", !m_inv || u_inv);
  if (u_inv) {
    auto xd = canonical_dual(x, tol);
    auto yd = canonical_dual(y, tol);
    auto m_inv_formula = detail::multiplier_op(op_invert(u, tol), xd, yd);
    const auto id = detail::identity_like(x);
    c.check_le("|M_{U,Y,X} M_{U^-1,X~,Y~} - Id|", op_norm(compose(m, m_inv_formula) - id), tol.check);
    c.check_le("|M_{U^-1,X~,Y~} M_{U,Y,X} - Id|", op_norm(compose(m_inv_formula, m) - id), tol.check);
  }
  return c;
}

// U invertible, Y a modular Riesz basis, X a frame: X has a unique dual
// <=> M_{U,Y,X} is invertible. When |X| differs from |Y| no multiplier
// over a common index set exists and M is reported not invertible.
inline Certificate certify_unique_dual(const FrameSequence& y, const FrameSequence& x, const ModuleOperator& u,
                                       const Tolerances& tol = {}) {
  if (!op_is_invertible(u, tol)) throw singular_error("certify_unique_dual: U is not invertible");
  Certificate c("unique_dual", 0, tol);
  auto ry = is_modular_riesz(y, tol);
  bool ok = c.require("Y is a modular Riesz basis", ry.is_riesz);
  ok = c.require("X is a frame", x.is_frame()) && ok;
  if (!ry.is_riesz) c.notes.push_back("Y: " + ry.reason);
  if (!ok) return c;
  if (u.domain_rank() != x.size()) throw shape_error("certify_unique_dual: U must act on A^|X|");

  const bool unique = has_unique_dual(x, tol);
  bool m_inv = false;
  if (x.size() == y.size()) {
    auto m = detail::multiplier_op(u, y, x);
    m_inv = op_is_invertible(m, tol);
    c.constants["sigma_min_M"] = op_min_sv(m);
  } else {
    c.notes.push_back("index sets differ (|X| = " + std::to_string(x.size()) + ", |Y| = " +
                      std::to_string(y.size()) + "): no square-invertible multiplier exists");
  }
  const auto& t = x.analysis_operator();
  c.constants["sigma_min_TTstar"] = op_min_sv(compose(t, adjoint(t)));
  c.constants["unique_dual"] = unique ? 1.0 : 0.0;
  c.constants["M_invertible"] = m_inv ? 1.0 : 0.0;
  c.check("unique dual => M invertible", !unique || m_inv);
  c.check("M invertible => unique dual", !m_inv || unique);
  return c;
}

// Structural properties of M_{U,Y,X}: adjoint M^* = M_{U^*,X,Y}, finite-rank
// propagation U = sum theta(a_j, b_j) => M = sum theta(T_X^* a_j, T_Y^* b_j),
// positivity of M_{P,X,X} for the positive symbol P = U^* U, and the Bessel
// bound |M| <= sqrt(D_X D_Y) |U|.
inline Certificate certify_multiplier_properties(const ModuleOperator& u, const FrameSequence& y,
                                                 const FrameSequence& x, std::uint64_t seed = 0,
                                                 const Tolerances& tol = {}, int samples = 50) {
  Certificate c("multiplier_properties", seed, tol);
  Multiplier mult(u, y, x);
  const auto& m = mult.assembled();
  const double nm = op_norm(m);
  const double scale = std::max(1.0, nm);
  c.constants = {{"norm_M", nm}, {"norm_U", op_norm(u)}, {"D_X", x.bounds().upper}, {"D_Y", y.bounds().upper}};

  auto madj = multiplier_adjoint(mult).assembled();
  c.check_le("M^* = M_{U^*,X,Y}", op_norm(madj - adjoint(m)), 1e-10 * scale);

  auto rng = CounterRng::stream(seed, {0x3333});
  double resid = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto a = gen::random_vector(x.shape(), x.rank(), rng);
    auto b = gen::random_vector(y.shape(), y.rank(), rng);
    const double r = distance(inner_product(mult.apply(a), b), inner_product(a, madj.apply(b)));
    resid = std::max(resid, r / (norm(a) * norm(b)));
  }
  c.constants["sampled_adjoint_residual"] = resid;
  c.check_le("<Mx, y> = <x, M_{U^*,X,Y} y>", resid, 1e-10 * scale);

  c.check_le("|M| <= sqrt(D_X D_Y)|U|", nm,
             std::sqrt(x.bounds().upper * y.bounds().upper) * op_norm(u) * (1 + tol.check) + 1e-14);

  const auto rank_u = complex_rank(u);
  const auto rank_m = complex_rank(m);
  c.constants["rank_U"] = static_cast<double>(rank_u);
  c.constants["rank_M"] = static_cast<double>(rank_m);
  c.check_le("rank(M) <= rank(U)", static_cast<double>(rank_m), static_cast<double>(rank_u));

  auto pairs = finite_rank_decompose(u);
  c.constants["elementary_terms"] = static_cast<double>(pairs.size());
  auto tx_adj = x.synthesis_operator();
  auto ty_adj = y.synthesis_operator();
  auto rebuilt = ModuleOperator::zero(x.shape(), x.rank(), y.rank());
  for (const auto& p : pairs) rebuilt += theta(tx_adj.apply(p.x), ty_adj.apply(p.y));
  c.check_le("M = sum theta(T_X^* a_j, T_Y^* b_j)", op_norm(rebuilt - m), 1e-9 * scale);

  auto p = compose(adjoint(u), u);
  auto mp = detail::multiplier_op(p, x, x);
  const auto sb = spectral_bounds(mp, tol);
  c.constants["lambda_min_M_PXX"] = sb.lower;
  c.check("U^*U >= 0 gives M_{U^*U,X,X} >= 0", op_positive(mp, tol));
  return c;
}

// Reconstruction with the canonical dual on sampled vectors, and the
// canonical dual's bounds (1/D, 1/C).
inline Certificate certify_reconstruction(const FrameSequence& x, std::uint64_t seed = 0,
                                          const Tolerances& tol = {}, int samples = 100) {
  Certificate c("reconstruction", seed, tol);
  if (!c.require("X is a frame", x.is_frame())) return c;
  auto dual = canonical_dual(x, tol);
  auto rng = CounterRng::stream(seed, {0x7265});
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto v = gen::random_vector(x.shape(), x.rank(), rng);
    ModuleVector a = ModuleVector::zero(x.shape(), x.rank());
    ModuleVector b = ModuleVector::zero(x.shape(), x.rank());
    for (int n = 0; n < x.size(); ++n) {
      a += inner_product(v, dual[n]) * x[n];
      b += inner_product(v, x[n]) * dual[n];
    }
    worst = std::max(worst, std::max(distance(a, v), distance(b, v)) / norm(v));
  }
  const double cl = x.bounds().lower, du = x.bounds().upper;
  c.constants = {{"C", cl}, {"D", du}, {"dual_C", dual.bounds().lower}, {"dual_D", dual.bounds().upper},
                 {"max_relative_residual", worst}};
  c.check_le("both reconstruction sums equal x", worst, 1e-9);
  c.check_le("dual lower bound = 1/D", std::abs(dual.bounds().lower * du - 1.0), 1e-8);
  c.check_le("dual upper bound = 1/C", std::abs(dual.bounds().upper * cl - 1.0), 1e-8);
  return c;
}

// C Id <= S <= D Id at the optimal bounds, and neither bound can be
// improved by a relative 1e-6.
inline Certificate certify_frame_bounds(const FrameSequence& x, const Tolerances& tol = {}) {
  Certificate c("frame_bounds", 0, tol);
  if (!c.require("X is a frame", x.is_frame())) return c;
  const double cl = x.bounds().lower, du = x.bounds().upper;
  const auto& s = x.frame_operator();
  const auto id = detail::identity_like(x);
  c.constants = {{"C", cl}, {"D", du}};
  c.check("S - C Id >= 0", op_positive(s - cl * id, tol));
  c.check("D Id - S >= 0", op_positive(du * id - s, tol));
  c.check("S - (C + 1e-6 C) Id >= 0 fails", !op_positive(s - (cl * (1 + 1e-6)) * id, tol));
  c.check("(D - 1e-6 D) Id - S >= 0 fails", !op_positive((du * (1 - 1e-6)) * id - s, tol));
  c.check("S = T^* T", op_norm(s - compose(x.synthesis_operator(), x.analysis_operator())) <= 1e-10 * std::max(1.0, du));
  return c;
}

}  // namespace cstar
