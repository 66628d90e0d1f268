#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace otray {

/// Worker count from OTRAY_THREADS (unset or 0 means hardware concurrency).
unsigned worker_count();

/// Calls body(i) for i in [0, n). Indices are split into contiguous chunks,
/// one per worker; body must only write to slots owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation; result depends only on the input order.
double pairwise_sum(std::span<const double> xs);

/// Reproducible random stream. The 64-bit engine output is standardized,
/// the transforms to doubles are done here so results do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t next() { return eng_(); }

  /// Independent stream for sub-task `index` (SplitMix64 of seed and index).
  static Rng substream(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace otray
