#ifndef ESQPT_RNG_HPP
#define ESQPT_RNG_HPP

#include <cstdint>
#include <cmath>
#include <random>

#include "esqpt/types.hpp"

namespace esqpt {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream seed for worker/shard `index` derived from a master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x2545f4914f6cdd1dULL * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

/// Deterministic random stream. mt19937_64 is bit-exact per the standard;
/// uniform and Gaussian draws below avoid the implementation-defined
/// std::*_distribution classes so streams reproduce across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via the polar (Marsaglia) method.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  Vec gaussian_vector(int n) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = gaussian();
    return x;
  }

  /// Uniform point on the sphere of given radius in R^n.
  Vec on_sphere(int n, double radius) {
    Vec x = gaussian_vector(n);
    return x * (radius / x.norm());
  }

  /// Uniform point in the ball of given radius in R^n.
  Vec in_ball(int n, double radius) {
    Vec x = on_sphere(n, radius);
    return x * std::pow(uniform01(), 1.0 / n);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace esqpt

#endif
