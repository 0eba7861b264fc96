#include "opdsim/arrivals.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <stdexcept>

namespace opdsim {

IntensityProfile::IntensityProfile(std::vector<Breakpoint> breakpoints, double lambda_max)
    : points_(std::move(breakpoints)), lambda_max_(lambda_max) {
  if (!(lambda_max_ > 0.0)) throw ValidationError("intensity profile: lambda_max must be positive");
  if (points_.size() < 2) throw ValidationError("intensity profile needs at least two breakpoints");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& bp = points_[i];
    if (bp.rate < 0.0) throw ValidationError("intensity profile: negative rate");
    if (bp.rate > lambda_max_ * (1.0 + 1e-12))
      throw ValidationError(fmt::format("intensity profile: rate {} exceeds lambda_max {}", bp.rate, lambda_max_));
    if (i > 0 && !(bp.t > points_[i - 1].t))
      throw ValidationError("intensity profile: breakpoint times must be strictly increasing");
  }
}

double IntensityProfile::rate(Minutes t) const {
  if (points_.empty() || t < points_.front().t || t > points_.back().t) return 0.0;
  auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                             [](Minutes value, const Breakpoint& bp) { return value < bp.t; });
  if (hi == points_.end()) return points_.back().rate;
  auto lo = hi - 1;
  const double frac = (t - lo->t) / (hi->t - lo->t);
  return lo->rate + frac * (hi->rate - lo->rate);
}

double IntensityProfile::integral() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i)
    sum += 0.5 * (points_[i - 1].rate + points_[i].rate) * (points_[i].t - points_[i - 1].t);
  return sum;
}

IntensityProfile default_profile(double expected_arrivals, Minutes session_length) {
  constexpr double kOpen = 0.8, kPeak = 1.6, kClose = 0.4;
  const Minutes peak_at = session_length / 4.0;
  // Integral of the unit-scale shape, used to solve for the base rate.
  const double unit_area = 0.5 * (kOpen + kPeak) * peak_at + 0.5 * (kPeak + kClose) * (session_length - peak_at);
  const double base = expected_arrivals / unit_area;
  return IntensityProfile({{0.0, kOpen * base}, {peak_at, kPeak * base}, {session_length, kClose * base}},
                          kPeak * base);
}

std::vector<Minutes> thin_once(const IntensityProfile& profile, Rng& rng, ThinningStats* stats) {
  std::exponential_distribution<double> gap(profile.lambda_max());
  std::vector<Minutes> out;
  Minutes t = profile.start();
  for (;;) {
    t += gap(rng);
    if (t > profile.end()) break;
    const bool accept = uniform01(rng) * profile.lambda_max() < profile.rate(t);
    if (stats) {
      ++stats->proposals;
      if (accept) ++stats->accepted;
    }
    if (accept) out.push_back(t);
  }
  return out;
}

ArrivalSample sample_arrivals(const IntensityProfile& profile, std::size_t n_patients, std::uint64_t seed) {
  if (!(profile.lambda_max() > 0.0)) throw ContractViolation("sample_arrivals: lambda_max must be positive");
  Rng rng = make_stream(seed, Stream::Arrivals);
  ArrivalSample sample;
  for (std::size_t attempt = 1; attempt <= kMaxArrivalAttempts; ++attempt) {
    auto times = thin_once(profile, rng);
    if (attempt == 1) sample.first_count = times.size();
    if (times.size() == n_patients) {
      sample.times = std::move(times);
      sample.attempts = attempt;
      return sample;
    }
  }
  throw std::runtime_error(fmt::format("no arrival trajectory with exactly {} arrivals after {} attempts",
                                       n_patients, kMaxArrivalAttempts));
}

}  // namespace opdsim
