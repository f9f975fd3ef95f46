#pragma once

// Deterministic random numbers for synthetic-spectrum generation.
//
// The generator stack is fixed and documented so that committed golden
// count files stay valid:
//
//   * SplitMix64 (Steele/Lea/Flood) for seeding and stream derivation.
//   * xoshiro256** (Blackman/Vigna) as the sampling generator.
//   * Per-bin streams: bin b of run seed s uses an xoshiro256** generator
//     seeded from splitmix64(s XOR 0x9E3779B97F4A7C15 * (b + 1)), so counts
//     are independent of bin evaluation order.
//   * Uniform doubles take the top 53 bits: (x >> 11) * 2^-53 in [0, 1).
//   * Poisson sampling: Knuth's product method for mu < 50, Hoermann's PTRS
//     transformed rejection for mu >= 50 (constants from the 1993 paper).
//
// Integer and double arithmetic here is exact IEEE; the PTRS branch also
// calls log/lgamma, so bit-identical counts across platforms assume a
// correctly rounding libm (always true for repeated runs on one platform).

#include <array>
#include <cmath>
#include <cstdint>

#include "collapse_radiance/errors.hpp"

namespace collapse_radiance {

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15uLL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9uLL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBuLL;
    return z ^ (z >> 31);
  }
};

struct Xoshiro256StarStar {
  std::array<std::uint64_t, 4> s{};

  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s) word = sm.next();
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  //! Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

//! Seed of the dedicated generator for bin `bin_index` of run seed `seed`.
inline std::uint64_t bin_stream_seed(std::uint64_t seed,
                                     std::uint64_t bin_index) {
  SplitMix64 sm(seed ^ (0x9E3779B97F4A7C15uLL * (bin_index + 1)));
  return sm.next();
}

namespace detail {

inline std::int64_t poisson_knuth(Xoshiro256StarStar& rng, double mu) {
  const double limit = std::exp(-mu);
  std::int64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.next_double();
  } while (p > limit);
  return k - 1;
}

inline std::int64_t poisson_ptrs(Xoshiro256StarStar& rng, double mu) {
  const double b = 0.931 + 2.53 * std::sqrt(mu);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mu);
  for (;;) {
    const double u = rng.next_double() - 0.5;
    const double v = rng.next_double();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
    if (us >= 0.07 && v <= v_r) {
      return static_cast<std::int64_t>(kf);
    }
    if (kf < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    const double k = kf;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        -mu + k * log_mu - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(kf);
    }
  }
}

}  // namespace detail

//! Draw one Poisson(mu) variate from the documented sampler.
inline std::int64_t poisson_sample(Xoshiro256StarStar& rng, double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw DomainError("poisson_sample: mean must be finite and >= 0");
  }
  if (mu == 0.0) return 0;
  if (mu < 50.0) return detail::poisson_knuth(rng, mu);
  return detail::poisson_ptrs(rng, mu);
}

}  // namespace collapse_radiance
