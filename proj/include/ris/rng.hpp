#pragma once

#include <cstdint>
#include <span>

namespace ris {

// splitmix64 finalizer; used both as a stand-alone mixer and to seed Xoshiro.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Purpose tags for deriving independent, reproducible streams from one master
// seed. Stream seed = mix(mix(master ^ mix(purpose)) ^ index).
enum class Stream : std::uint64_t {
  LearningStage = 1,
  ResultStage = 2,
  NetworkGen = 3,
  EvidenceGen = 4,
  Shard = 5,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream purpose,
                                 std::uint64_t index = 0) {
  std::uint64_t s = splitmix64_mix(static_cast<std::uint64_t>(purpose));
  s = splitmix64_mix(master ^ s);
  return splitmix64_mix(s ^ index);
}

// xoshiro256++ — fixed algorithm so runs are bit-reproducible across
// platforms (std distributions are not pinned by the standard).
class Xoshiro {
 public:
  explicit Xoshiro(std::uint64_t seed = 0) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x = splitmix64_mix(x);
      word = x;
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); rejection keeps it exactly uniform.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Index drawn from an unnormalized nonnegative weight vector.
  std::size_t next_weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = next_double() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace ris
