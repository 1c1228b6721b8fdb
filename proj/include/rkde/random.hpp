#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rkde {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit key is the master seed and the upper half of the 128-bit
/// counter is the stream id, so stream k of seed s is a pure function of
/// (s, k).  Each block yields two 64-bit outputs.  Satisfies
/// UniformRandomBitGenerator.
class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in the open interval (0, 1) with 53 random bits.
  double uniform();

  /// Standard normal variate (Box-Muller, both outputs used).
  double normal();

  std::uint64_t block_index() const { return block_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> out_{};
  int pos_ = 2;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Raw Philox4x32-10 bijection, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

inline constexpr const char* kRngId = "philox4x32-10/box-muller";

}  // namespace rkde
