#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace heavytail {

/// SplitMix64 finalizer; a bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for stream `index` of a parent seed. Replicate r of a bootstrap uses
/// derive_seed(seed, r), so any worker can regenerate any replicate.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Uniform doubles on the open interval (0, 1) with 53 random bits each.
/// The conversion is done here rather than through
/// std::uniform_real_distribution so streams are identical across standard
/// library implementations.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  double next() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  void fill(std::span<double> out) noexcept {
    for (double& u : out) u = next();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace heavytail
