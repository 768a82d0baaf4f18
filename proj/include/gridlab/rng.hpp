// Deterministic random streams.
//
// Generator: SplitMix64 (Steele, Lea & Flood's 64-bit mixer; the reference
// stream behind java.util.SplittableRandom). State advances by the golden
// gamma and each output is the murmur-style finalizer of the state, so a
// stream is a pure function of its starting state.
//
// Substreams: stream(seed, index) starts from a double application of the
// finalizer to seed XOR (index+1)*gamma. Every trial of a run gets its own
// substream derived from (seed, trial index), which makes results
// independent of worker count and execution order: trial i's draws never
// depend on how many draws trial i-1 consumed.

#pragma once

#include <cstdint>

namespace gridlab {

namespace detail {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Substream constructor: decorrelates (seed, index) pairs before use.
  SplitMix64(std::uint64_t seed, std::uint64_t index)
      : state_(detail::mix64(detail::mix64(seed ^ ((index + 1) * detail::kGamma)))) {}

  std::uint64_t next_u64() {
    state_ += detail::kGamma;
    return detail::mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits (exactly representable).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on {1, ..., k}, unbiased (Lemire's multiply-shift with rejection).
  std::int64_t next_label(std::int64_t k) {
    const auto range = static_cast<std::uint64_t>(k);
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
      const std::uint64_t threshold = (0ULL - range) % range;  // 2^64 mod range
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * range;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::int64_t>(m >> 64) + 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace gridlab
