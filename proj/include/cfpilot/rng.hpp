#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cfpilot {

// splitmix64 finalizer; used to whiten seed material
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from (master, tags). Every consumer of
// randomness gets its own stream so that adding a consumer never shifts the
// draws seen by another one.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t t0,
                                 std::uint64_t t1 = 0, std::uint64_t t2 = 0) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ t0);
  h = mix64(h ^ t1);
  h = mix64(h ^ t2);
  return h;
}

// Stream tags. Append only; renumbering breaks reproducibility of stored runs.
enum class Stream : std::uint64_t {
  Placement = 1,
  Shadowing = 2,
  LocationError = 3,
  Solver = 4,
  Fading = 5,
};

inline std::uint64_t derive_seed(std::uint64_t master, int drop, Stream s,
                                 std::uint64_t extra = 0) {
  return derive_seed(master, static_cast<std::uint64_t>(drop),
                     static_cast<std::uint64_t>(s), extra);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // unbiased integer in [0, n)
  std::size_t uniform_index(std::size_t n) {
    assert(n > 0);
    const std::uint64_t un = n;
    const std::uint64_t min = (0 - un) % un;  // 2^64 mod n
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x < min);
    return static_cast<std::size_t>(x % un);
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    assert(hi >= lo);
    return lo + static_cast<int>(uniform_index(static_cast<std::size_t>(hi - lo) + 1));
  }

  // standard normal via Box-Muller, pair cached
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cfpilot
