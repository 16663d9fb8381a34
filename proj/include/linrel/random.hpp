#pragma once

#include <cstdint>
#include <random>

#include "linrel/types.hpp"

namespace linrel {

/// Mixes a base seed with a stream id (splitmix64 finalizer).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seeded generator whose output is identical on every platform: the
/// distributions are computed here from raw mt19937_64 words rather than
/// through the implementation-defined std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  [[nodiscard]] double uniform();  // [0, 1)
  [[nodiscard]] double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  [[nodiscard]] int uniform_int(int lo, int hi);  // inclusive
  [[nodiscard]] double normal();
  [[nodiscard]] Scalar complex_normal();
  [[nodiscard]] Matrix gaussian(Index rows, Index cols);
  [[nodiscard]] Vector gaussian(Index size);
  /// rows x cols matrix with orthonormal columns (cols <= rows).
  [[nodiscard]] Matrix orthonormal_frame(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace linrel
