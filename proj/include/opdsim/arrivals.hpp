#pragma once

// Non-homogeneous Poisson arrivals sampled by thinning against a constant
// majorising rate.

#include <cstdint>
#include <utility>
#include <vector>

#include "opdsim/rng.hpp"
#include "opdsim/types.hpp"

namespace opdsim {

struct Breakpoint {
  Minutes t = 0.0;
  double rate = 0.0;  // patients per minute

  bool operator==(const Breakpoint&) const = default;
};

// Piecewise-linear intensity over [front.t, back.t]; zero outside.
class IntensityProfile {
 public:
  IntensityProfile() = default;
  // Throws ValidationError if the profile is malformed (unsorted, negative,
  // exceeding lambda_max, or lambda_max <= 0).
  IntensityProfile(std::vector<Breakpoint> breakpoints, double lambda_max);

  double rate(Minutes t) const;
  double lambda_max() const { return lambda_max_; }
  Minutes start() const { return points_.front().t; }
  Minutes end() const { return points_.back().t; }
  double integral() const;
  const std::vector<Breakpoint>& breakpoints() const { return points_; }

  bool operator==(const IntensityProfile&) const = default;

 private:
  std::vector<Breakpoint> points_;
  double lambda_max_ = 0.0;
};

/// Morning-peaked profile over the 360-minute session: 0.8x base at opening,
/// 1.6x at minute 90, 0.4x at close, scaled so the expected arrival count is
/// exactly `expected_arrivals`.
IntensityProfile default_profile(double expected_arrivals = 368.0, Minutes session_length = 360.0);

struct ThinningStats {
  std::size_t proposals = 0;
  std::size_t accepted = 0;
};

/// One thinning pass over the whole profile. Returns sorted arrival times.
std::vector<Minutes> thin_once(const IntensityProfile& profile, Rng& rng, ThinningStats* stats = nullptr);

struct ArrivalSample {
  std::vector<Minutes> times;
  std::size_t attempts = 0;
  std::size_t first_count = 0;  // arrivals in the first trajectory, before resampling
};

inline constexpr std::size_t kMaxArrivalAttempts = 1000;

/// Resamples whole trajectories until exactly `n_patients` arrivals occur.
/// Throws ContractViolation if the profile is invalid and std::runtime_error
/// if no trajectory matches within kMaxArrivalAttempts.
ArrivalSample sample_arrivals(const IntensityProfile& profile, std::size_t n_patients, std::uint64_t seed);

}  // namespace opdsim
