#include "grfkit/random.hpp"

namespace grfkit {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr int kRounds = 10;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b) noexcept {
  constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  std::uint64_t h = mix64(base + kGolden);
  h = mix64(h ^ (a + 2 * kGolden));
  return mix64(h ^ (b + 3 * kGolden));
}

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
  for (int round = 0; round < kRounds; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Philox4x32::Key Philox4x32::key_from_seed(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::uint64_t bounded(std::uint64_t bits, std::uint64_t n) noexcept {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(bits) * n) >> 64);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint32_t stream) noexcept
    : key_(Philox4x32::key_from_seed(seed)), stream_(stream) {}

std::uint64_t CounterRng::next_u64() noexcept {
  if (buffered_words_ == 0) {
    buffer_ = Philox4x32::block({static_cast<std::uint32_t>(position_),
                                 static_cast<std::uint32_t>(position_ >> 32),
                                 stream_, 0xC0FFEEu},
                                key_);
    ++position_;
    buffered_words_ = 4;
  }
  const int hi = 4 - buffered_words_;
  buffered_words_ -= 2;
  return (static_cast<std::uint64_t>(buffer_[hi]) << 32) | buffer_[hi + 1];
}

double CounterRng::uniform() noexcept { return unit_interval(next_u64()); }

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  return bounded(next_u64(), n);
}

}  // namespace grfkit
