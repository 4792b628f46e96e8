#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace starcore {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-trial stream: hash the root seed with the trial index so trials are
// reproducible independently of execution order (and of --jobs).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(root ^ splitmix64(index + 0x51ca7e5a11ULL));
}

// mt19937_64 core with hand-rolled bounded draws. std::uniform_*_distribution
// is not pinned down by the standard, so we avoid it; identical seeds must
// give identical streams on any toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Fair +1 / -1 coin.
  int coin_sign() { return (engine_() & 1) ? 1 : -1; }

  // Index into a cumulative weight table (ascending, last entry ~1).
  std::size_t pick_cumulative(const std::vector<double>& cumulative) {
    double u = unit();
    std::size_t i =
        std::upper_bound(cumulative.begin(), cumulative.end(), u) -
        cumulative.begin();
    return i < cumulative.size() ? i : cumulative.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace starcore
