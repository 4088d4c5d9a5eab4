#pragma once

#include <cstdint>

namespace privopt {

// Seedable counter-style generator (SplitMix64 scrambler).
//
// Stream splitting rule: split(k) derives a child generator from the
// *construction seed* of this generator, independent of how many values
// have been drawn from it:
//
//   child_seed = mix64(mix64(seed ^ 0x5851f42d4c957f2d) + (k + 1) * GOLDEN)
//
// with GOLDEN = 0x9e3779b97f4a7c15 and mix64 the SplitMix64 finalizer.
// Harnesses use one substream per trial and, inside the mechanism, one
// substream per constraint index, so parallel sweeps reproduce exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1): bin midpoints, never returns an exact endpoint.
  double next_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  Rng split(std::uint64_t stream) const {
    std::uint64_t base = mix64(seed_ ^ 0x5851f42d4c957f2dULL);
    return Rng(mix64(base + (stream + 1) * 0x9e3779b97f4a7c15ULL));
  }

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace privopt
