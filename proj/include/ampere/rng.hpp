#pragma once

#include <cstdint>
#include <random>

namespace ampere {

/// Seeded generator with a fixed mapping to doubles so that frozen test
/// values and CSV outputs do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(eng_() % uint64_t(hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ampere
