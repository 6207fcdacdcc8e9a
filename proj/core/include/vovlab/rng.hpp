#pragma once

#include <cstdint>
#include <cmath>

#include "vovlab/errors.hpp"
#include "vovlab/stable_math.hpp"

namespace vov {

// Deterministic, reproducible random numbers. Every simulated path draws from
// its own keyed substreams, derived from (master seed, path index, purpose),
// so results are independent of scheduling and of the number of worker
// threads, and adding a purpose never perturbs the draws of another.

// splitmix64 output function; also used as the seed/stream mixer.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class StreamPurpose : std::uint64_t {
  VolLeg = 1,    // variance-process innovations
  PriceLeg = 2,  // price innovations orthogonal to the variance leg
  Noise = 3,     // observation noise
  Generic = 4,   // miscellaneous draws (tests, config sampling)
};

// Key a substream on (master, path, purpose). Three chained avalanche rounds;
// distinct tuples give independent-looking streams.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t path_index,
                                 StreamPurpose purpose) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ (path_index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(purpose) * 0x9e6c63d0876a9a47ULL + 0xb5d4c168c8cc5cdbULL));
  return h;
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// xoshiro256++ engine seeded through splitmix64.
struct Xoshiro256pp {
  std::uint64_t s[4];

  explicit Xoshiro256pp(std::uint64_t seed = 0x6a09e667f3bcc909ULL) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s) w = splitmix64_next(sm);
    // All-zero state is invalid for xoshiro; splitmix64 cannot produce four
    // zero words from any seed, but keep the guard explicit.
    if ((s[0] | s[1] | s[2] | s[3]) == 0) s[0] = 0x9e3779b97f4a7c15ULL;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl64(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl64(s[3], 45);
    return result;
  }
};

// Substream generator with the scalar distributions the simulators need.
// Normals use the inverse-CDF map (one uniform per normal) so streams stay
// aligned; gamma variates use Marsaglia-Tsang rejection, which consumes a
// variable number of draws but only within its own substream.
struct Rng {
  Xoshiro256pp eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}
  Rng(std::uint64_t master, std::uint64_t path_index, StreamPurpose purpose)
      : eng(stream_seed(master, path_index, purpose)) {}

  std::uint64_t u64() { return eng.next(); }

  // Uniform on the open interval (0,1): 53 random bits + half-ulp offset.
  double uniform01() {
    return (static_cast<double>(eng.next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return inv_norm_cdf(uniform01()); }

  // Gamma(shape, scale=1), shape > 0.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw config_error("gamma: shape must be positive");
    if (shape < 1.0) {
      // Boost: G(a) = G(a+1) * U^{1/a}.
      const double u = uniform01();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform01();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Noncentral chi-square with df > 1 degrees of freedom and noncentrality nc:
  // (Z + sqrt(nc))^2 + 2 * Gamma((df-1)/2).
  double chi2_noncentral(double df, double nc) {
    if (!(df > 1.0)) throw config_error("chi2_noncentral: df must exceed 1");
    if (nc < 0.0) throw config_error("chi2_noncentral: noncentrality must be nonnegative");
    const double z = normal() + std::sqrt(nc);
    return z * z + 2.0 * gamma(0.5 * (df - 1.0));
  }
};

}  // namespace vov
