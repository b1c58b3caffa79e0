#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace hypercondense {

/// Mixes a root seed with a stream name and up to three counters into an
/// independent 64-bit seed. Every random draw in the library goes through a
/// stream derived this way, so perturbing one component (say, the sampling
/// stream of epoch 17) never shifts the draws of another.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream,
                          std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0);

/// Thin wrapper over mt19937_64 with distribution helpers whose output does
/// not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t root, std::string_view stream, std::uint64_t a = 0, std::uint64_t b = 0,
      std::uint64_t c = 0)
      : engine_(derive_seed(root, stream, a, b, c)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Uniform real in [0, 1).
  double uniform01();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller.
  double normal();

  /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hypercondense
