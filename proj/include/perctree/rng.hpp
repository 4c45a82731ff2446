#pragma once

#include <cstdint>

namespace perctree::rng {

/// Algorithm identifier recorded alongside Monte Carlo estimates.
inline constexpr const char* kAlgorithm = "splitmix64";

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// SplitMix64 finalizer (Steele/Lea/Vigna constants). Pure integer ops, so
/// streams reproduce bit-exactly across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

/// Independent sub-stream for one trial: the trial index is hashed into the
/// seed so neighboring trials do not share shifted output sequences.
inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return SplitMix64(mix64(seed ^ kGoldenGamma) ^ mix64(trial + 0x632BE59BD9B4E019ull));
}

/// Threshold for "u64 draw < threshold" Bernoulli(p) sampling; p in (0,1).
inline std::uint64_t bernoulli_threshold(double p) {
  return static_cast<std::uint64_t>(p * 18446744073709551616.0);  // p * 2^64
}

}  // namespace perctree::rng
