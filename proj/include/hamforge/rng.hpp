// Deterministic random-number plumbing: splitmix64-derived substreams so
// Monte-Carlo results are independent of scheduling, plus a Box-Muller
// normal sampler (std::normal_distribution is not bit-stable across
// implementations).
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hamforge {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent engine for task `index` under a master seed.
inline std::mt19937_64 substream(std::uint64_t master_seed,
                                 std::uint64_t index) {
  std::uint64_t s = master_seed + 0x632be59bd9b4e019ULL * (index + 1);
  std::uint64_t a = splitmix64_next(s);
  std::uint64_t b = splitmix64_next(s);
  return std::mt19937_64(a ^ (b << 1));
}

// Uniform in (0,1), never exactly 0 or 1.
inline double uniform01(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Box-Muller standard normal sampler.
struct NormalSampler {
  std::mt19937_64 eng;
  bool have_spare = false;
  double spare = 0.0;

  explicit NormalSampler(std::uint64_t seed) : eng(seed) {}
  explicit NormalSampler(std::mt19937_64 e) : eng(std::move(e)) {}

  double operator()() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u1 = uniform01(eng);
    double u2 = uniform01(eng);
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare = r * std::sin(a);
    have_spare = true;
    return r * std::cos(a);
  }
};

}  // namespace hamforge
