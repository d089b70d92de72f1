#pragma once

#include <cstdint>
#include <random>

namespace kickdyn {

/// SplitMix64 finaliser; used to derive independent stream seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of stream i derived from a base seed: mix(seed, i).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline constexpr std::uint64_t kDefaultSeed = 20240613ULL;

/// Seeded 64-bit engine with the uniform draws the simulators need.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (-1, 1): (k + 1/2) 2^-52 - 1 for a 52-bit k,
  /// symmetric and never +-1.
  double uniform_open_unit() noexcept {
    const std::uint64_t k = engine_() >> 12;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-51 - 1.0;
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kickdyn
