#pragma once

#include <cstdint>
#include <random>

namespace qg {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64 seeded through splitmix64; split(i) gives independent reproducible streams
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), eng_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ed27ULL))) {}

  Rng split(std::uint64_t i) const { return Rng(splitmix64(seed_ ^ (stream_ * 0x9e3779b97f4a7c15ULL)), i + 1); }

  std::uint64_t next() { return eng_(); }

  // 53-bit uniform in [0,1), identical on every platform
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    std::uint64_t lim = (~std::uint64_t(0)) - (~std::uint64_t(0)) % n;
    std::uint64_t x;
    do x = next();
    while (x >= lim);
    return x % n;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_, stream_;
  std::mt19937_64 eng_;
};

}  // namespace qg
