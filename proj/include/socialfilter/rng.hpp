#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace socialfilter {

/// Deterministic xoshiro256** generator. The standard distributions are
/// implementation-defined, so simulations draw through the helpers below to
/// keep identical seeds producing identical runs across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix(x);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    // Debiased multiply-shift (Lemire).
    __uint128_t m = static_cast<__uint128_t>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint32_t below32(std::uint32_t bound) {
    return static_cast<std::uint32_t>(below(bound));
  }

  /// Uniform double in [0, 1).
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * real01(); }

  /// Exponential with the given mean (> 0).
  double exponential(double mean) { return -mean * std::log(1.0 - real01()); }

  bool chance(double p) { return real01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  /// k distinct values from [0, n), in selection order.
  std::vector<std::uint32_t> sample_distinct(std::uint32_t n, std::uint32_t k);

  /// Independent generator for a named sub-stream of the same seed.
  Rng fork(std::uint64_t stream) const {
    std::uint64_t x = state_[0] ^ rotl(state_[2], 13) ^ (0x9E3779B97F4A7C15ull * (stream + 1));
    return Rng(splitmix(x));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

inline std::vector<std::uint32_t> Rng::sample_distinct(std::uint32_t n, std::uint32_t k) {
  std::vector<std::uint32_t> out;
  if (k == 0 || n == 0) return out;
  if (k >= n) {
    out.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) out[i] = i;
    shuffle(out);
    return out;
  }
  out.reserve(k);
  if (k * 3ull >= n) {
    // Dense case: partial Fisher-Yates over the full range.
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint32_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + below32(n - i)]);
      out.push_back(pool[i]);
    }
    return out;
  }
  // Sparse case: rejection sampling with a small seen-set.
  std::vector<bool> seen(n, false);
  while (out.size() < k) {
    const std::uint32_t x = below32(n);
    if (!seen[x]) {
      seen[x] = true;
      out.push_back(x);
    }
  }
  return out;
}

}  // namespace socialfilter
