#pragma once

#include <cmath>
#include <cstdint>

namespace cyclefv {

/// splitmix64 step: advances the state and returns the next output.
/// Used only to expand seeds into stream states.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ generator with independent streams derived from
/// (seed, stream) through splitmix64. The generator is hand-rolled, not
/// std::mt19937 + distributions, because the distribution algorithms in the
/// standard library are implementation-defined and the simulator promises
/// byte-identical output for a fixed seed regardless of thread count.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed + stream * 0x9e3779b97f4a7c15ULL;
    for (auto& s : s_) s = splitmix64(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Exponential variate with the given rate. Safe at u = 0 since
  /// log1p(-u) = log(1 - u) and u < 1.
  double next_exponential(double rate) { return -std::log1p(-next_unit()) / rate; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace cyclefv
