#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cstar/serialize.hpp"

namespace cstar {

// Plain finite frame theory on C^k: frame vectors are the columns of F,
// <h, x> = x^H h.
namespace hilbert {

struct Frame {
  CMatrix f;  // k x N
};

inline CMatrix frame_operator(const Frame& x) { return x.f * x.f.adjoint(); }

inline std::pair<double, double> bounds(const Frame& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(frame_operator(x), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

inline CMatrix canonical_dual(const Frame& x) { return frame_operator(x).inverse() * x.f; }

// M h = sum_k sum_j U_{kj} <h, x_j> y_k, one column per basis vector h = e_m.
inline CMatrix multiplier(const CMatrix& u, const Frame& y, const Frame& x) {
  const auto k = x.f.rows();
  const auto n = x.f.cols();
  CMatrix m = CMatrix::Zero(k, k);
  for (Eigen::Index col = 0; col < k; ++col) {
    for (Eigen::Index kk = 0; kk < n; ++kk) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const cplx inner = std::conj(x.f(col, j));  // <e_col, x_j>
        m.col(col) += u(kk, j) * inner * y.f.col(kk);
      }
    }
  }
  return m;
}

}  // namespace hilbert

// A = C views of module objects.
inline hilbert::Frame to_hilbert(const FrameSequence& s) {
  if (!(s.shape() == AlgebraShape::scalar())) throw shape_error("to_hilbert: algebra must be C");
  CMatrix f(s.rank(), s.size());
  for (int n = 0; n < s.size(); ++n) f.col(n) = s[n].block(0).row(0).transpose();
  return {f};
}

inline FrameSequence from_hilbert(const CMatrix& f) {
  const auto shape = AlgebraShape::scalar();
  std::vector<ModuleVector> v;
  for (Eigen::Index n = 0; n < f.cols(); ++n) {
    v.push_back(ModuleVector(shape, static_cast<int>(f.rows()), {CMatrix(f.col(n).transpose())}));
  }
  return FrameSequence(shape, static_cast<int>(f.rows()), std::move(v));
}

inline ModuleOperator symbol_from_matrix(const CMatrix& u) {
  const auto shape = AlgebraShape::scalar();
  std::vector<std::vector<AlgebraElement>> e(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index j = 0; j < u.rows(); ++j)
    for (Eigen::Index i = 0; i < u.cols(); ++i) e[static_cast<std::size_t>(j)].push_back(AlgebraElement::scalar(shape, u(j, i)));
  return ModuleOperator::from_entries(shape, static_cast<int>(u.cols()), e);
}

inline FrameSequence mercedes_benz_frame() {
  const double h = std::sqrt(3.0) / 2.0;
  CMatrix f(2, 3);
  f << 0.0, -h, h, 1.0, -0.5, -0.5;
  return from_hilbert(f);
}

struct CrosscheckInstance {
  int trial = 0;
  std::uint64_t seed = 0;
  int k = 0;
  int n = 0;
  double bounds_dev = 0.0;
  double frame_operator_dev = 0.0;
  double dual_dev = 0.0;
  double multiplier_dev = 0.0;
  double multiplier_norm_dev = 0.0;

  double max_dev() const {
    return std::max({bounds_dev, frame_operator_dev, dual_dev, multiplier_dev, multiplier_norm_dev});
  }
};

inline CrosscheckInstance crosscheck_instance(const FrameSequence& x, const FrameSequence& y, const CMatrix& u) {
  CrosscheckInstance r;
  r.k = x.rank();
  r.n = x.size();
  const auto hx = to_hilbert(x);
  const auto hy = to_hilbert(y);
  const auto [c, d] = hilbert::bounds(hx);
  r.bounds_dev = std::max(std::abs(c - x.bounds().lower), std::abs(d - x.bounds().upper));
  r.frame_operator_dev = (complex_realization(x.frame_operator()) - hilbert::frame_operator(hx)).cwiseAbs().maxCoeff();
  r.dual_dev = (to_hilbert(canonical_dual(x)).f - hilbert::canonical_dual(hx)).cwiseAbs().maxCoeff();
  const CMatrix direct = hilbert::multiplier(u, hy, hx);
  const CMatrix module = complex_realization(Multiplier(symbol_from_matrix(u), y, x).assembled());
  r.multiplier_dev = (module - direct).cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<CMatrix> svd(direct);
  r.multiplier_norm_dev = std::abs(svd.singularValues()(0) - op_norm(Multiplier(symbol_from_matrix(u), y, x).assembled()));
  return r;
}

struct CrosscheckRun {
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  double mercedes_c = 0.0, mercedes_d = 0.0;
  double mercedes_direct_c = 0.0, mercedes_direct_d = 0.0;
  double onb_dev = 0.0;
  std::vector<CrosscheckInstance> instances;

  bool mercedes_pass() const {
    return std::abs(mercedes_c - 1.5) <= tolerance && std::abs(mercedes_d - 1.5) <= tolerance &&
           std::abs(mercedes_direct_c - 1.5) <= tolerance && std::abs(mercedes_direct_d - 1.5) <= tolerance;
  }
  double max_dev() const {
    double m = onb_dev;
    for (const auto& i : instances) m = std::max(m, i.max_dev());
    return m;
  }
  bool pass() const { return mercedes_pass() && max_dev() <= tolerance; }
};

inline CrosscheckRun scalar_crosscheck(std::uint64_t seed, int instances = 100) {
  CrosscheckRun run;
  run.seed = seed;
  const auto mb = mercedes_benz_frame();
  run.mercedes_c = mb.bounds().lower;
  run.mercedes_d = mb.bounds().upper;
  std::tie(run.mercedes_direct_c, run.mercedes_direct_d) = hilbert::bounds(to_hilbert(mb));

  const auto onb = FrameSequence(standard_basis(AlgebraShape::scalar(), 3));
  run.onb_dev = std::max((complex_realization(onb.frame_operator()) - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(),
                         (hilbert::frame_operator(to_hilbert(onb)) - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff());

  const auto shape = AlgebraShape::scalar();
  for (int t = 0; t < instances; ++t) {
    const auto s = CounterRng::stream(seed, {0xC0, static_cast<std::uint64_t>(t)}).next();
    CounterRng rng(s);
    const int k = rng.uniform_int(1, 4);
    const int n = rng.uniform_int(k, 8);
    auto x = gen::random_frame(shape, k, n, rng);
    auto y = gen::random_frame(shape, k, n, rng);
    CMatrix u = gen::random_matrix(n, n, rng);
    auto inst = crosscheck_instance(x, y, u);
    inst.trial = t;
    inst.seed = s;
    run.instances.push_back(inst);
  }
  return run;
}

namespace io {

inline json crosscheck_to_json(const CrosscheckRun& r) {
  json inst = json::array();
  for (const auto& i : r.instances) {
    inst.push_back({{"trial", i.trial},
                    {"seed", i.seed},
                    {"k", i.k},
                    {"N", i.n},
                    {"bounds", i.bounds_dev},
                    {"frame_operator", i.frame_operator_dev},
                    {"canonical_dual", i.dual_dev},
                    {"multiplier", i.multiplier_dev},
                    {"multiplier_norm", i.multiplier_norm_dev}});
  }
  return {{"kind", "crosscheck"},
          {"environment", environment_stamp(Tolerances{}, r.seed)},
          {"tolerance", r.tolerance},
          {"mercedes_benz",
           {{"module", {r.mercedes_c, r.mercedes_d}},
            {"direct", {r.mercedes_direct_c, r.mercedes_direct_d}},
            {"pass", r.mercedes_pass()}}},
          {"onb_frame_operator_deviation", r.onb_dev},
          {"summary", {{"instances", static_cast<int>(r.instances.size())}, {"max_deviation", r.max_dev()}, {"pass", r.pass()}}},
          {"instances", inst}};
}

}  // namespace io

}  // namespace cstar
