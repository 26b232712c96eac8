#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace lpmlab {

/// splitmix64 finalizer: a bijective 64-bit mix with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds integer parts into `seed`, one mixing round per part.
/// Replicate seeds and per-dyad substreams are derived through this, so every
/// random quantity is a pure function of the user-facing seed; wall-clock
/// seeding is never used.
template <class... Parts>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Parts... parts) noexcept {
  std::uint64_t h = mix64(seed);
  ((h = mix64(h ^ static_cast<std::uint64_t>(parts))), ...);
  return h;
}

/// Maps a 64-bit word to [0, 1) using the top 53 bits.
constexpr double to_unit_interval(std::uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// The single uniform draw owned by the unordered dyad {i, j}. Stateless, so
/// the result is independent of traversal order and worker count.
inline double dyad_uniform(std::uint64_t seed, std::uint64_t i, std::uint64_t j) noexcept {
  const std::uint64_t a = i < j ? i : j;
  const std::uint64_t b = i < j ? j : i;
  return to_unit_interval(derive_seed(seed, a, b));
}

/// xoshiro256++ seeded through splitmix64. Byte-stable across platforms and
/// standard-library implementations, unlike std:: distributions, which is
/// what the reproducibility contract needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      word = mix64(x);
      x += 0x9e3779b97f4a7c15ULL;
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next() noexcept {
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

  /// Uniform on [0, 1).
  double uniform() noexcept { return to_unit_interval(next()); }

  /// Uniform on [a, b).
  double uniform(double a, double b) noexcept { return a + (b - a) * uniform(); }

  /// Uniform on (0, 1]; safe as a log argument.
  double open_unit() noexcept {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Unit-rate exponential, strictly positive.
  double exponential() noexcept {
    double e;
    do {
      e = -std::log(open_unit());
    } while (!(e > 0.0));
    return e;
  }

  /// Standard normal via Box-Muller; one value per call.
  double normal() noexcept {
    const double u1 = open_unit();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace lpmlab
