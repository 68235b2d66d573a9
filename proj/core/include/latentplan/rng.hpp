#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

namespace latentplan {

// Deterministic random source. All sampling in the library goes through this
// class so that a run is reproducible bit-for-bit from its seed: the
// generator (splitmix64) and every distribution transform are implemented
// here rather than delegated to the standard library, whose distribution
// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    // splitmix64 (public-domain constants).
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1): 53 random mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Lemire's multiply-shift map; the bias for the
  // n used here (n << 2^64) is far below anything observable.
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller. One value per call; no cached spare, so
  // the stream position is a pure function of the call count.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

  // Independent child stream identified by a label. Used to give each stage
  // of a pipeline (dataset, model init, batching, evaluation trials, ...)
  // its own stream whose draws do not shift when another stage changes how
  // much randomness it consumes.
  Rng fork(std::string_view tag) const {
    Rng child(state_ ^ fnv1a64(tag));
    child.next_u64();  // decorrelate from the parent state
    return child;
  }

  Rng fork(std::uint64_t salt) const {
    Rng child(state_ ^ (salt * 0x9E3779B97F4A7C15ULL + 0x165667B19E3779F9ULL));
    child.next_u64();
    return child;
  }

  static std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return h;
  }

 private:
  std::uint64_t state_;
};

}  // namespace latentplan
