#ifndef AMSBQ_RNG_HPP
#define AMSBQ_RNG_HPP

#include <cmath>
#include <cstdint>

namespace amsbq {

// Counter-based random stream. Every draw is a pure function of
// (key, counter), so a stream can be re-created from its seed alone and
// sub-streams can be split off deterministically without sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

  // Derives an independent stream addressed by `tag`. Splitting does not
  // consume draws from the parent.
  Rng split(std::uint64_t tag) const {
    return Rng(Raw{}, mix(key_ ^ mix(tag + 0x632be59bd9b4e019ull)));
  }
  Rng split(std::uint64_t tag_a, std::uint64_t tag_b) const {
    return split(tag_a).split(tag_b);
  }

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; consumes two draws per call, no cached spare.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  double exponential(double rate) {
    double u = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    return -std::log(u) / rate;
  }

  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  struct Raw {};
  Rng(Raw, std::uint64_t key) : key_(key) {}

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace amsbq

#endif
