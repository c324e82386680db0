#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

#include "sim/errors.hpp"

namespace sim {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t fnv1a64(const void* data, size_t n) {
  return fnv1a64(std::string_view(static_cast<const char*>(data), n));
}

// Deterministic RNG with explicit stream derivation. Distributions are
// implemented here (not via <random> distribution classes) so that outputs
// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  uint64_t seed() const { return seed_; }

  // Independent substream addressed by up to three integer ids.
  Rng derived(uint64_t a, uint64_t b = 0, uint64_t c = 0) const {
    uint64_t s = seed_;
    s = splitmix64(s ^ (a + 0x9e3779b97f4a7c15ull));
    s = splitmix64(s ^ (b + 0x7f4a7c159e3779b9ull));
    s = splitmix64(s ^ (c + 0x85ebca6b2545f491ull));
    return Rng(s);
  }
  Rng derived(std::string_view tag, uint64_t a = 0, uint64_t b = 0) const {
    return derived(fnv1a64(tag), a, b);
  }

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n).
  uint64_t integer(uint64_t n) {
    if (n == 0) throw ArgumentError("Rng::integer: n must be positive");
    uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller with a cached spare.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // First k slots of a Fisher-Yates shuffle of 0..n-1: a uniform k-subset in
  // uniform random order.
  std::vector<int> sample_without_replacement(int n, int k) {
    if (k > n) throw ArgumentError("sample_without_replacement: k > n");
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i) {
      int j = i + int(integer(uint64_t(n - i)));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sim
