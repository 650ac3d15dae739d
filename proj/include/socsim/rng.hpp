#pragma once

// Deterministic randomness for every stochastic component.
//
// Engine: xoshiro256** 1.0 (Blackman & Vigna, public domain), seeded through
// splitmix64. Replica streams are separated with long_jump(), which advances
// the state by 2^192 steps, so concurrent replicas never overlap.
//
// The helpers below stand in for <random> distributions, which are
// implementation-defined; run outputs must be bit-identical for a given
// seed regardless of the standard library.

#include <array>
#include <cstdint>

namespace socsim {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable sub-stream seed: the (stream+1)-th splitmix64 output of `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t sm = seed;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= stream; ++i) out = splitmix64_next(sm);
  return out;
}

class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  static constexpr const char* algorithm_name = "xoshiro256**";
  static constexpr const char* algorithm_version = "1.0";

  explicit Xoshiro256StarStar(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
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

  // Equivalent to 2^192 calls; partitions the period into disjoint streams.
  void long_jump() {
    static constexpr std::uint64_t table[] = {
        0x76e15d3efefdcbbfULL, 0xc5004e441c522fb3ULL,
        0x77710069854ee241ULL, 0x39109bb02acbe635ULL};
    std::uint64_t s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    for (std::uint64_t word : table) {
      for (int bit = 0; bit < 64; ++bit) {
        if (word & (std::uint64_t{1} << bit)) {
          s0 ^= state_[0];
          s1 ^= state_[1];
          s2 ^= state_[2];
          s3 ^= state_[3];
        }
        (*this)();
      }
    }
    state_ = {s0, s1, s2, s3};
  }

  const std::array<std::uint64_t, 4>& state() const { return state_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

// Unbiased integer in [0, bound); bound must be >= 1.
// Lemire's multiply-shift method with rejection.
inline std::uint64_t uniform_index(Xoshiro256StarStar& rng,
                                   std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Double in [0, 1) with 53 significant bits.
inline double uniform_real(Xoshiro256StarStar& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Double in (0, 1]; safe as a logarithm argument.
inline double uniform_real_positive(Xoshiro256StarStar& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

inline bool bernoulli(Xoshiro256StarStar& rng, double p) {
  return uniform_real(rng) < p;
}

}  // namespace socsim
