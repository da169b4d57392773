// rng.hpp
// Seeded random source shared by every sampling path. Uniform doubles come
// from the top 53 bits of a mersenne twister step, so a given seed produces
// the same draw sequence on every platform and standard library.
#pragma once

#include <cstdint>
#include <random>

namespace qtel {

class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : engine_(seed) {}

  // uniform double in [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qtel
