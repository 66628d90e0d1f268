#include "otray/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

namespace otray {

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("OTRAY_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  try {
    const long v = std::stol(env);
    if (v <= 0) return hw;
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    return hw;
  }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Rng Rng::substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return Rng(z);
}

}  // namespace otray
