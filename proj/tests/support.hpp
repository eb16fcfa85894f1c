#pragma once

#include <cstdint>
#include <algorithm>
#include <random>
#include <vector>

#include "skm/dmc.hpp"

namespace skm_test {

/// Hand-rolled property generator: seeded draws of the shapes the suites need.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  /// Row-stochastic m x m matrix with strictly positive entries.
  skm::Matrix stochastic(std::size_t m) {
    skm::Matrix p(m, std::vector<double>(m));
    for (auto& row : p) {
      double s = 0.0;
      for (double& v : row) s += (v = uniform(0.01, 1.0));
      for (double& v : row) v /= s;
    }
    return p;
  }

  std::vector<double> distribution(std::size_t m) {
    std::vector<double> p(m);
    double s = 0.0;
    for (double& v : p) s += (v = uniform(0.01, 1.0));
    for (double& v : p) v /= s;
    return p;
  }

  /// Sorted subset of size m drawn from `universe`.
  std::vector<int> subset(const std::vector<int>& universe, std::size_t m) {
    std::vector<int> u = universe;
    std::shuffle(u.begin(), u.end(), rng_);
    u.resize(m);
    std::sort(u.begin(), u.end());
    return u;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Runs `body(gen, case_index)` for `cases` independently seeded cases.
template <class F>
void for_all(int cases, std::uint64_t seed, F&& body) {
  for (int i = 0; i < cases; ++i) {
    Gen g(seed * 1000003ULL + static_cast<std::uint64_t>(i));
    body(g, i);
  }
}

}  // namespace skm_test
