#ifndef DEPTEXT_RANDOM_HPP
#define DEPTEXT_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace deptext {

/// Seeded generator whose output is identical on every platform.
///
/// std::mt19937_64 has a standard-mandated sequence, but the std
/// distributions do not, so the conversions below are done by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Derives a child seed from a parent seed and a label (FNV-1a + splitmix).
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);

}  // namespace deptext

#endif  // DEPTEXT_RANDOM_HPP
