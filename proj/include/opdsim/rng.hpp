#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace opdsim {

using Rng = std::mt19937_64;

// Independent stream for a given purpose, so that draws made for one purpose
// never shift the sequence seen by another.
enum class Stream : std::uint32_t {
  Demographics = 1,
  History = 2,
  Arrivals = 3,
  Pairing = 4,
  Registration = 5,
  Consult = 6,
  Drift = 7,
  Memory = 8,
  Triage = 9,
};

inline Rng make_stream(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x6f70u};
  return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Normal(mean, sd) conditioned on x >= lower, sampled by rejection so the
// untruncated mean is only shifted by the (small) rejected tail.
inline double truncated_normal(Rng& rng, double mean, double sd, double lower) {
  if (sd < 0.0) throw std::invalid_argument("truncated_normal: negative sd");
  if (sd == 0.0) {
    if (mean < lower) throw std::invalid_argument("truncated_normal: mean below bound with sd=0");
    return mean;
  }
  if (mean + 6.0 * sd < lower) throw std::invalid_argument("truncated_normal: bound too far in tail");
  std::normal_distribution<double> dist(mean, sd);
  for (;;) {
    const double x = dist(rng);
    if (x >= lower) return x;
  }
}

}  // namespace opdsim
