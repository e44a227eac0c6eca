#pragma once

// Counter-based random streams.
//
// Every random quantity in a run is addressed by (seed, domain, index, sub)
// and generated with the Philox4x32-10 bijection, so the value drawn for a
// given atom never depends on which worker produced it or in which order.

#include <array>
#include <cmath>
#include <cstdint>

namespace h1s2s {

/// Philox4x32-10 block function (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter single_round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Independent stream families drawn from one seed.
enum class StreamDomain : std::uint32_t {
  kTrajectory = 1,
  kIntensityNoise = 2,
  kNozzleRadius = 3,
  kSeedDerivation = 4,
  kTest = 15,
};

/// Sequential uniform deviates from one (seed, domain, index, sub) address.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamDomain domain, std::uint64_t index,
               std::uint32_t sub = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        counter_{0u, sub, static_cast<std::uint32_t>(index),
                 (static_cast<std::uint32_t>(index >> 32) & 0x0FFFFFFFu) |
                     (static_cast<std::uint32_t>(domain) << 28)} {}

  /// Next raw 32-bit word.
  std::uint32_t next_u32() {
    if (lane_ == 4) refill();
    return block_[lane_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = next_u32() >> 5;  // 27 bits
    const std::uint64_t lo = next_u32() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a logarithm argument.
  double uniform_positive() { return 1.0 - uniform(); }

  /// Standard normal deviate (Box-Muller, one value per call).
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_positive()));
    return r * std::cos(6.283185307179586 * uniform());
  }

 private:
  void refill() {
    block_ = Philox4x32::generate(counter_, key_);
    ++counter_[0];
    lane_ = 0;
  }

  Philox4x32::Key key_;
  Philox4x32::Counter counter_;
  Philox4x32::Counter block_{};
  int lane_ = 4;
};

/// Deterministically derives a child seed, e.g. one ensemble per (scan, point).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint32_t b = 0) {
  RandomStream s(seed, StreamDomain::kSeedDerivation, a, b);
  const std::uint64_t hi = s.next_u32();
  return (hi << 32) | s.next_u32();
}

}  // namespace h1s2s
