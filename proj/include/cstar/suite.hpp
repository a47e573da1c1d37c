#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "cstar/certificate.hpp"

namespace cstar {

struct TrialResult {
  std::string family;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string shape;
  int rank = 0;
  int size = 0;
  Certificate certificate;
};

// A seeded trial family: every trial draws its instance from
// CounterRng(seed) and returns one certificate.
struct TrialFamily {
  std::string name;
  std::string theorem;
  Verdict expected = Verdict::verified;
  int default_trials = 200;
  std::function<TrialResult(std::uint64_t, int, const Tolerances&)> run;
};

namespace suite_detail {

struct Dims {
  AlgebraShape shape;
  int k;
  int n;
};

// Desk-scale dimensions: k <= 3 and N <= k + extra.
inline Dims draw_dims(CounterRng& rng, int min_extra, int max_extra) {
  auto shape = gen::random_shape(rng);
  const int k = rng.uniform_int(1, 3);
  const int n = k + rng.uniform_int(min_extra, max_extra);
  return {shape, k, n};
}

inline TrialResult finish(const std::string& family, int trial, std::uint64_t seed, const Dims& d, Certificate c) {
  c.seed = seed;
  return {family, trial, seed, d.shape.to_string(), d.k, d.n, std::move(c)};
}

inline ModuleOperator singular_symbol(const AlgebraShape& shape, int n, CounterRng& rng) {
  auto u = gen::random_operator(shape, n, n, rng);
  const int row = rng.uniform_int(0, n - 1);
  const auto zero = AlgebraElement::zero(shape);
  for (int i = 0; i < n; ++i) u.set_entry(row, i, zero);
  return u;
}

}  // namespace suite_detail

inline std::vector<TrialFamily> default_families() {
  using namespace suite_detail;
  std::vector<TrialFamily> f;

  f.push_back({"multiplier_properties", "multiplier_properties", Verdict::verified, 200,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 auto d = draw_dims(rng, 0, 3);
                 auto x = gen::random_frame(d.shape, d.k, d.n, rng, 0.02, tol);
                 auto y = gen::random_frame(d.shape, d.k, d.n, rng, 0.02, tol);
                 const int r = rng.uniform_int(1, d.n);
                 auto u = trial % 2 == 0 ? gen::random_operator(d.shape, d.n, d.n, rng)
                                         : gen::random_low_rank(d.shape, d.n, d.n, r, rng);
                 return finish("multiplier_properties", trial, seed, d,
                               certify_multiplier_properties(u, y, x, seed, tol));
               }});

  auto perturbation = [](double factor, const char* name) {
    return [factor, name](std::uint64_t seed, int trial, const Tolerances& tol) {
      CounterRng rng(seed);
      auto d = draw_dims(rng, 0, 0);
      auto u = gen::random_invertible(d.shape, d.k, rng);
      const double gamma = 1.0 / op_norm(op_invert(u, tol));
      auto w = u + gen::random_contraction(d.shape, d.k, d.k, factor * gamma, rng);
      return finish(name, trial, seed, d, certify_perturbation(u, w, seed, tol));
    };
  };
  f.push_back({"perturbation", "perturbation", Verdict::verified, 200, perturbation(0.9, "perturbation")});
  f.push_back({"perturbation_beyond", "perturbation", Verdict::hypothesis_not_met, 200,
               perturbation(1.1, "perturbation_beyond")});

  f.push_back({"lower_frame", "lower_frame", Verdict::verified, 200,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 // Even trials: Riesz pair. Odd trials: overcomplete frames.
                 auto d = draw_dims(rng, trial % 2 == 0 ? 0 : 1, trial % 2 == 0 ? 0 : 3);
                 auto x = trial % 2 == 0 ? gen::random_riesz_basis(d.shape, d.k, rng, tol)
                                         : gen::random_frame(d.shape, d.k, d.n, rng, 0.02, tol);
                 auto y = trial % 2 == 0 ? gen::random_riesz_basis(d.shape, d.k, rng, tol)
                                         : gen::random_frame(d.shape, d.k, d.n, rng, 0.02, tol);
                 auto u = gen::random_invertible(d.shape, d.n, rng);
                 return finish("lower_frame", trial, seed, d, certify_lower_frame(u, y, x, seed, tol));
               }});

  f.push_back({"sequence_perturbation", "sequence_perturbation", Verdict::verified, 200,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 auto d = draw_dims(rng, 1, 3);
                 // A = C with k = 1 only has tight frames.
                 if (d.shape.dims() == std::vector<int>{1} && d.k == 1) {
                   d.k = 2;
                   d.n += 1;
                 }
                 auto x = gen::random_frame(d.shape, d.k, d.n, rng, 0.02, tol);
                 const double c = x.bounds().lower, dd = x.bounds().upper;
                 const double ratio = (c * dd * dd - c * c * dd) / (c * c + dd * dd);
                 const double threshold = ratio * ratio / dd;
                 auto y = gen::perturb_difference_bound(x, 0.8 * threshold, rng, tol);
                 auto u = gen::near_identity_symbol(d.shape, d.n, 0.8 * c * c / (dd * dd), rng);
                 return finish("sequence_perturbation", trial, seed, d, certify_sequence_perturbation(x, y, u, tol));
               }});

  f.push_back({"frame_image", "frame_image", Verdict::verified, 200,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 auto d = draw_dims(rng, 0, 3);
                 auto y = gen::random_frame(d.shape, d.k, d.n, rng, 0.02, tol);
                 auto w = gen::random_invertible(d.shape, d.k, rng);
                 auto u = gen::near_identity_symbol(d.shape, d.n, 0.8 * y.bounds().lower / y.bounds().upper, rng);
                 return finish("frame_image", trial, seed, d, certify_frame_image(y, w, u, tol));
               }});

  f.push_back({"dual_multiplier", "dual_multiplier", Verdict::verified, 200,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 auto d = draw_dims(rng, 1, 3);
                 auto x = gen::random_frame(d.shape, d.k, d.n, rng, 0.02, tol);
                 const double rho = rng.uniform(0.0, 0.5);
                 auto pair = gen::alternative_dual(x, rho, rng, tol);
                 auto u = gen::near_identity_symbol(d.shape, d.n, 0.8 / (2.0 * x.bounds().upper), rng);
                 return finish("dual_multiplier", trial, seed, d, certify_dual_multiplier(pair.frame, pair.dual, u, tol));
               }});

  f.push_back({"near_dual", "near_dual", Verdict::verified, 200,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 auto d = draw_dims(rng, 0, 3);
                 auto y = gen::random_frame(d.shape, d.k, d.n, rng, 0.02, tol);
                 const double c = y.bounds().lower, dd = y.bounds().upper;
                 auto x = gen::perturb_sum_squares(canonical_dual(y, tol), 0.8 / (4.0 * dd), rng, tol);
                 // U = (1 - a) I + b E, |E| = 1: |U - I| <= a + b, |U| <= 1 - a + b.
                 const double r = std::sqrt(c / (4.0 * dd));
                 const double a = 0.6 * 0.8 * r, b = 0.4 * 0.8 * r;
                 auto u = (1.0 - a) * ModuleOperator::identity(d.shape, d.n) +
                          gen::random_contraction(d.shape, d.n, d.n, b, rng);
                 return finish("near_dual", trial, seed, d, certify_near_dual(y, x, u, tol));
               }});

  f.push_back({"riesz_injectivity", "riesz_injectivity", Verdict::verified, 200,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 auto d = draw_dims(rng, 0, 0);
                 auto x = gen::random_riesz_basis(d.shape, d.k, rng, tol);
                 auto y = gen::random_riesz_basis(d.shape, d.k, rng, tol);
                 auto u1 = gen::random_operator(d.shape, d.n, d.n, rng);
                 auto u2 = u1;
                 if (trial % 10 != 0) u2 += gen::random_contraction(d.shape, d.n, d.n, 1e-3, rng);
                 return finish("riesz_injectivity", trial, seed, d, certify_riesz_injectivity(x, y, u1, u2, tol));
               }});

  f.push_back({"riesz_norm_bounds", "riesz_norm_bounds", Verdict::verified, 500,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 auto d = draw_dims(rng, 0, 0);
                 auto x = gen::random_riesz_basis(d.shape, d.k, rng, tol);
                 auto y = gen::random_riesz_basis(d.shape, d.k, rng, tol);
                 auto u = gen::random_operator(d.shape, d.n, d.n, rng);
                 return finish("riesz_norm_bounds", trial, seed, d, certify_riesz_norm_bounds(x, y, u, tol));
               }});

  f.push_back({"riesz_invertibility", "riesz_invertibility", Verdict::verified, 200,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 auto d = draw_dims(rng, 0, 0);
                 auto x = gen::random_riesz_basis(d.shape, d.k, rng, tol);
                 auto y = gen::random_riesz_basis(d.shape, d.k, rng, tol);
                 // 20 of 200 symbols are singular (a zero coefficient row).
                 auto u = trial % 10 == 0 ? singular_symbol(d.shape, d.n, rng)
                                          : gen::random_invertible(d.shape, d.n, rng);
                 return finish("riesz_invertibility", trial, seed, d, certify_riesz_invertibility(x, y, u, tol));
               }});

  f.push_back({"unique_dual", "unique_dual", Verdict::verified, 200,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 // One trial in four uses an overcomplete frame (non-unique dual).
                 const bool overcomplete = trial % 4 == 3;
                 auto d = draw_dims(rng, overcomplete ? 1 : 0, overcomplete ? 3 : 0);
                 auto y = gen::random_riesz_basis(d.shape, d.k, rng, tol);
                 FrameSequence x = overcomplete
                                       ? gen::random_frame(d.shape, d.k, d.n, rng, 0.02, tol)
                                       : image(gen::random_invertible(d.shape, d.k, rng),
                                               gen::random_riesz_basis(d.shape, d.k, rng, tol), tol);
                 auto u = gen::random_invertible(d.shape, d.n, rng);
                 return finish("unique_dual", trial, seed, d, certify_unique_dual(y, x, u, tol));
               }});

  f.push_back({"reconstruction", "reconstruction", Verdict::verified, 50,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 static const std::vector<std::vector<int>> shapes = {{1}, {2}, {2, 1}};
                 AlgebraShape shape(shapes[static_cast<std::size_t>(rng.uniform_int(0, 2))]);
                 const int k = rng.uniform_int(1, 4);
                 const int n = rng.uniform_int(k, 8);
                 Dims d{shape, k, n};
                 auto x = gen::random_frame(shape, k, n, rng, 0.02, tol);
                 return finish("reconstruction", trial, seed, d, certify_reconstruction(x, seed, tol));
               }});

  f.push_back({"frame_bounds", "frame_bounds", Verdict::verified, 200,
               [](std::uint64_t seed, int trial, const Tolerances& tol) {
                 CounterRng rng(seed);
                 auto d = draw_dims(rng, 0, 3);
                 auto x = gen::random_frame(d.shape, d.k, d.n, rng, 0.02, tol);
                 return finish("frame_bounds", trial, seed, d, certify_frame_bounds(x, tol));
               }});
  return f;
}

inline const TrialFamily& find_family(const std::vector<TrialFamily>& families, const std::string& name) {
  for (const auto& f : families)
    if (f.name == name) return f;
  throw std::invalid_argument("unknown theorem family: " + name);
}

inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t family_index, int trial) {
  return CounterRng::stream(seed, {family_index, static_cast<std::uint64_t>(trial)}).next();
}

struct FamilyRun {
  std::string family;
  std::string theorem;
  Verdict expected = Verdict::verified;
  std::vector<TrialResult> trials;
  std::map<std::string, int> counts;
  int unexpected = 0;
  int violations = 0;
  int errors = 0;
  std::vector<std::string> error_messages;

  bool pass() const { return violations == 0 && unexpected == 0 && errors == 0; }
};

// Runs `trials` seeded trials of one family on a pool of worker threads;
// results are stored by trial index so the output order never depends on
// scheduling.
inline FamilyRun run_family(const TrialFamily& fam, std::size_t family_index, std::uint64_t seed, int trials,
                            const Tolerances& tol = {}, unsigned threads = 0) {
  FamilyRun out;
  out.family = fam.name;
  out.theorem = fam.theorem;
  out.expected = fam.expected;
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  std::vector<std::string> errors(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < trials; t = next++) {
      const auto s = trial_seed(seed, family_index, t);
      try {
        results[static_cast<std::size_t>(t)] = fam.run(s, t, tol);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(t)] = std::string(e.what()).empty() ? "error" : e.what();
        results[static_cast<std::size_t>(t)].family = fam.name;
        results[static_cast<std::size_t>(t)].trial = t;
        results[static_cast<std::size_t>(t)].seed = s;
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(trials, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const char* v : {"verified", "hypothesis_not_met", "VIOLATION"}) out.counts[v] = 0;
  for (int t = 0; t < trials; ++t) {
    const auto& err = errors[static_cast<std::size_t>(t)];
    if (!err.empty()) {
      ++out.errors;
      out.error_messages.push_back("trial " + std::to_string(t) + ": " + err);
      continue;
    }
    const auto v = results[static_cast<std::size_t>(t)].certificate.verdict();
    ++out.counts[to_string(v)];
    if (v == Verdict::violation) ++out.violations;
    if (v != fam.expected) ++out.unexpected;
  }
  out.trials = std::move(results);
  return out;
}

struct SuiteRun {
  std::uint64_t seed = 0;
  Tolerances tolerances;
  std::vector<FamilyRun> families;

  int violations() const {
    int v = 0;
    for (const auto& f : families) v += f.violations;
    return v;
  }
  bool pass() const {
    return std::all_of(families.begin(), families.end(), [](const FamilyRun& f) { return f.pass(); });
  }
};

// trials <= 0 uses each family's default count.
inline SuiteRun run_suite(std::uint64_t seed, const Tolerances& tol = {}, int trials = 0,
                          const std::vector<std::string>& only = {}, unsigned threads = 0) {
  SuiteRun run{seed, tol, {}};
  const auto families = default_families();
  for (std::size_t i = 0; i < families.size(); ++i) {
    const auto& fam = families[i];
    if (!only.empty() && std::find(only.begin(), only.end(), fam.name) == only.end()) continue;
    run.families.push_back(run_family(fam, i, seed, trials > 0 ? trials : fam.default_trials, tol, threads));
  }
  return run;
}

inline std::size_t family_index(const std::string& name) {
  const auto families = default_families();
  for (std::size_t i = 0; i < families.size(); ++i)
    if (families[i].name == name) return i;
  throw std::invalid_argument("unknown theorem family: " + name);
}

}  // namespace cstar
