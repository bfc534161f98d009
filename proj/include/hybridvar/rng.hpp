#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hybridvar {

/// Seedable, platform-independent random stream.
///
/// The engine is std::mt19937_64 seeded through std::seed_seq, both of which
/// have fully specified output sequences. Distributions are implemented here
/// rather than via <random> adaptors, whose outputs are implementation
/// defined. A (seed, stream) pair identifies one independent stream; callers
/// use one stream per ensemble member so that member k does not depend on how
/// many variates earlier members consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x68796272u};
    engine_.seed(seq);
  }

  /// Uniform on (0, 1], 53 bits of resolution.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the sine branch is cached for the next call.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform integer in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hybridvar
