#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace cpc {

/// Seeded pseudo-random stream. Shuffles and draws are implemented here
/// rather than through <random> distributions so sequences are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Binomial(trials, 1/2) as a sum of fair coin flips.
  std::uint64_t binomial_half(std::uint64_t trials) {
    std::uint64_t successes = 0;
    while (trials >= 64) {
      successes += static_cast<std::uint64_t>(__builtin_popcountll(engine_()));
      trials -= 64;
    }
    if (trials > 0) {
      const std::uint64_t mask = (std::uint64_t{1} << trials) - 1;
      successes += static_cast<std::uint64_t>(__builtin_popcountll(engine_() & mask));
    }
    return successes;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cpc
