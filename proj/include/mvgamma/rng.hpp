#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mvgamma {

/// Seed plus substream index. Distinct (seed, stream) pairs give
/// non-overlapping random sequences.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based engine. The key is the 64-bit seed; the 128-bit counter is
/// laid out as (block, chunk, stream_lo, stream_hi), so every
/// (seed, stream, chunk) triple owns a disjoint run of 2^33 outputs.
/// Satisfies UniformRandomBitGenerator with 64-bit output.
class RandomEngine {
 public:
  using result_type = std::uint64_t;

  explicit RandomEngine(RngSeed seed, std::uint32_t chunk = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform_open();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

}  // namespace mvgamma
