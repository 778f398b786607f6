#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace centaur {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// All randomness in the project flows through this wrapper. std::*_distribution
// output is implementation-defined, so bounded ints, doubles and gaussians are
// generated explicitly to keep seeded runs bit-reproducible.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t u64() { return gen_(); }

  // Uniform residue in Z_{2^bits}; 2^bits divides 2^64 so masking is unbiased.
  uint64_t residue(uint64_t mask) { return gen_() & mask; }

  // Uniform in [0, bound) via rejection sampling.
  uint64_t index(uint64_t bound) {
    uint64_t zone = ~uint64_t{0} - (~uint64_t{0} % bound);
    uint64_t v;
    do {
      v = gen_();
    } while (v >= zone);
    return v % bound;
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = unit();
    while (u1 <= 0.0) u1 = unit();
    double u2 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent child stream; tag namespaces the derivation.
  Rng fork(uint64_t tag) { return Rng(splitmix64(gen_() ^ splitmix64(tag))); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline uint64_t derive_seed(uint64_t seed, uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

}  // namespace centaur
