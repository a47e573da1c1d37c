#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>

namespace cstar {

// SplitMix64 run in counter mode: the n-th draw of a stream is
// mix64(key + n * golden), so any draw can be recomputed from
// (key, n) alone. Only integer arithmetic and exact conversions are
// used, which makes streams bit-identical across platforms and compilers.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  explicit CounterRng(std::uint64_t seed) : key_(mix64(seed)) {}

  // Independent stream keyed by a seed and a path of stream identifiers,
  // e.g. stream(seed, {theorem, trial}).
  static CounterRng stream(std::uint64_t seed,
                           std::initializer_list<std::uint64_t> path) {
    std::uint64_t key = mix64(seed);
    for (auto p : path) key = mix64(key ^ mix64(p + kGolden));
    CounterRng r(0);
    r.key_ = key;
    return r;
  }

  std::uint64_t next() { return mix64(key_ + kGolden * ++counter_); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next() % span);
  }

  // Real and imaginary parts independently uniform on [-1, 1).
  std::complex<double> complex_unit_box() {
    double re = uniform(-1.0, 1.0);
    double im = uniform(-1.0, 1.0);
    return {re, im};
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cstar
