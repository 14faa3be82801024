#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>

namespace rab {

/// Seeded source for instance generation.
///
/// Uniforms take the top 53 bits of std::mt19937_64; normals use the Box-Muller
/// transform on those uniforms. Both algorithms are fixed here (instead of
/// relying on std::normal_distribution) so a seed reproduces the same draws on
/// every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();

  /// Chi-square draw with `dof` degrees of freedom (sum of squared normals).
  double chi_square(unsigned dof);

  /// Real and imaginary parts independent N(0, 1).
  std::complex<double> complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// SplitMix64 finalizer; derives independent per-instance seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace rab
