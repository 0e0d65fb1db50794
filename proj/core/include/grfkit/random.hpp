#pragma once

#include <array>
#include <cstdint>

namespace grfkit {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives a child seed from a base seed and two indices. Used for
/// per-repeat and per-graph seeds so sweeps are order independent.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b = 0) noexcept;

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A block is a pure function of (counter, key); there is no state to
/// advance, so any stream position can be evaluated independently.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
  static Key key_from_seed(std::uint64_t seed) noexcept;
};

/// Maps 64 random bits to a double in [0, 1) with 53 bits of precision.
double unit_interval(std::uint64_t bits) noexcept;

/// Unbiased-enough integer in [0, n) via the high word of a 64x64 product.
std::uint64_t bounded(std::uint64_t bits, std::uint64_t n) noexcept;

/// Sequential engine on top of Philox, for graph generators.
///
/// `stream` selects an independent substream for the same seed (the ER
/// generator bumps it between regeneration attempts).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  double uniform() noexcept;
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  Philox4x32::Key key_;
  std::uint32_t stream_;
  std::uint64_t position_ = 0;
  Philox4x32::Counter buffer_{};
  int buffered_words_ = 0;
};

}  // namespace grfkit
