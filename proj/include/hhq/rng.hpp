#pragma once

#include <cmath>
#include <cstdint>

namespace hhq {

//! SplitMix64 step; used to derive well-mixed seeds from (seed, salt) pairs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//! xoshiro256** — small, fast, statistically solid 64-bit generator.
//! Every randomized structure owns one, seeded from (root seed, salt) so that
//! a whole run is a pure function of ProblemConfig::seed.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed, std::uint64_t salt = 0) {
    std::uint64_t sm = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    ++draws_;
    return result;
  }

  //! Uniform double in [0,1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  //! Uniform double in (0,1]; safe as a log() argument.
  double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  //! Unbiased uniform integer in [0, bound); bound > 0 (Lemire rejection).
  std::uint64_t bounded(std::uint64_t bound) {
    while (true) {
      std::uint64_t x = next();
      unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
      std::uint64_t low = static_cast<std::uint64_t>(m);
      if (low >= bound || low >= (0 - bound) % bound)
        return static_cast<std::uint64_t>(m >> 64);
    }
  }

  //! Standard normal via Marsaglia's polar method (spare cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, r2;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  //! Number of raw 64-bit draws so far (instrumentation for the skip tests).
  std::uint64_t draw_count() const { return draws_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
  std::uint64_t draws_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hhq
