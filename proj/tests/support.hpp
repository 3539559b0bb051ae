#pragma once

#include <cstdint>
#include <algorithm>
#include <cmath>
#include <random>

namespace testing {

/// Seeded source of random test inputs; the same seed gives the same cases.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  int nonzero(int lo, int hi) {
    int v = 0;
    while (v == 0) v = integer(lo, hi);
    return v;
  }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

/// Runs body(gen) for each of `cases` generated inputs.
template <class F>
void for_all(int cases, std::uint64_t seed, F&& body) {
  Gen gen(seed);
  for (int i = 0; i < cases; ++i) body(gen);
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace testing
