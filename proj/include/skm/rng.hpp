#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

#include <boost/random/normal_distribution.hpp>

namespace skm {

/// SplitMix64 finalizer (Steele, Lea & Flood); a bijection on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

/// Stable hash of an ordered list of words: chained SplitMix64 absorption.
/// Used for seed derivation, so its output is part of the reproducibility contract.
std::uint64_t hash_words(std::initializer_list<std::uint64_t> words);

/// Bit pattern of a double, for use as a hash word.
std::uint64_t double_bits(double v);

/// Counter-based random engine: draw k of stream `key` is splitmix64(key + (k+1) * golden).
///
/// Any draw can be reproduced from (key, k) alone, and substream(id) derives a
/// statistically independent stream, so realization t / screen m can be generated
/// in any order on any worker. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) : key_(key), counter_(counter) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++counter_;
    return splitmix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  CounterRng substream(std::uint64_t id) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Zero-mean, unit-variance normal sampler over a CounterRng (Boost ziggurat, whose output
/// sequence does not depend on the standard library implementation).
class NormalSampler {
 public:
  explicit NormalSampler(CounterRng rng) : rng_(rng) {}
  double operator()() { return dist_(rng_); }

 private:
  CounterRng rng_;
  boost::random::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace skm
