#pragma once

#include <cstdint>
#include <random>

#include "scomp/types.hpp"

namespace scomp {

// Deterministic draws on top of mt19937_64. The transforms are spelled out
// (no std::*_distribution) so identical seeds give bit-identical streams on
// every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    // Inclusive bounds; modulo bias is irrelevant at test scales.
    return lo + static_cast<std::int64_t>(eng_() %
                                          static_cast<std::uint64_t>(
                                              hi - lo + 1));
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Exact Poisson sampling: recursive mean halving (Poisson(a+b) splits into
  // independent halves) down to Knuth's product method, avoiding exp
  // underflow at large means.
  std::int64_t poisson(double mean) {
    if (mean < 0) throw DomainError("Rng::poisson: negative mean");
    if (mean == 0) return 0;
    std::int64_t total = 0;
    while (mean > 30.0) {
      const double half = 0.5 * mean;
      total += poisson(half);
      mean -= half;
    }
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return total + k - 1;
  }

  Vec normal_vec(Index n) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace scomp
