#pragma once

#include <cstdint>
#include <random>

namespace torusvc {

/// Seeded generator with a platform-independent output stream.
///
/// std::mt19937_64 is fully specified by the standard; the distributions are
/// not, so bounded draws use rejection sampling here instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace torusvc
