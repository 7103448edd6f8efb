#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace etas {

// Neumaier-compensated accumulator. Triggered-intensity sums run over
// thousands of terms spanning many orders of magnitude; naive summation
// loses digits that the gradient tests at 1e-10 would notice.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Deterministic RNG with explicit variate transforms. std::mt19937_64 is
// bit-portable; the distributions are hand-rolled so draws do not depend
// on standard-library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix(seed)) {}

  std::uint64_t next_u64() {
    // xoshiro-style mixing on top of a 64-bit LCG step
    std::uint64_t x = state_;
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
  }

  // uniform on (0,1), never exactly 0 or 1
  double uniform() {
    const double u = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    return u;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Marsaglia polar method with one cached deviate
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Kolmogorov-Smirnov statistic of a sample against Uniform(0,1).
// Values need not be sorted on entry.
double ks_statistic_uniform(std::vector<double> values);

// Asymptotic two-sided KS p-value (Kolmogorov distribution tail with the
// Stephens small-sample correction).
double ks_p_value(double statistic, std::size_t n);

// Linear-interpolation sample quantile (R type 7). Sorts a copy.
double sample_quantile(std::vector<double> values, double q);
double sample_mean(const std::vector<double>& values);
double sample_sd(const std::vector<double>& values);

}  // namespace etas
