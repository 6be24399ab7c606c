#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace itsa {

namespace detail {

// SplitMix64 finalizer; full-avalanche 64-bit mix.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Identifies one reproducible random stream. The pair (seed, stream_id)
// fully determines the generated sequence; distinct stream_ids select
// statistically independent streams of the same seed.
//
// child(id) descends into a fresh keyspace derived from this spec, so
// hierarchies like run -> replication -> bootstrap replicate can hand
// out non-colliding streams without coordination.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  constexpr RngSpec child(std::uint64_t id) const {
    return RngSpec{detail::mix64(seed + detail::kGamma * (stream_id + 1)), id};
  }
};

// xoshiro256++ generator with library-owned distributions. The standard
// library's distribution objects are implementation-defined, so uniform,
// normal and exponential sampling are done here to keep results
// bit-identical for a given RngSpec.
class RandomStream {
 public:
  explicit RandomStream(RngSpec spec) {
    // Seed the state from a SplitMix64 walk over the mixed key.
    std::uint64_t x = detail::mix64(spec.seed + detail::kGamma) ^
                      detail::rotl64(detail::mix64(spec.stream_id + detail::kGamma), 31);
    for (auto& s : state_) {
      x += detail::kGamma;
      s = detail::mix64(x);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = detail::kGamma;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1); safe to pass through log().
  double uniform_open01() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Uniform integer in [0, n) via 128-bit multiply-high.
  std::uint64_t uniform_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open01()));
    const double theta = 2.0 * std::numbers::pi * uniform01();
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  // Exponential(rate) by inversion: -ln(U)/rate with U on (0, 1).
  double exponential(double rate) { return -std::log(uniform_open01()) / rate; }

 private:
  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace itsa
