#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "opdsim/arrivals.hpp"

using namespace opdsim;

TEST_CASE("default profile integrates to 368 and peaks mid-morning") {
  const IntensityProfile p = default_profile();
  CHECK(p.integral() == doctest::Approx(368.0).epsilon(1e-12));
  CHECK(std::fabs(p.integral() - 368.0) < 1e-6);
  CHECK(p.rate(90) > p.rate(0));
  CHECK(p.rate(0) > p.rate(360));
  CHECK(368.0 / 360.0 == doctest::Approx(1.0222).epsilon(1e-4));
  for (double t = 0; t <= 360; t += 0.5) {
    CHECK(p.rate(t) >= 0.0);
    CHECK(p.rate(t) <= p.lambda_max());
  }
  // Trapezoid rule on a fine grid as an independent check of the integral.
  double area = 0.0;
  const int n = 36000;
  for (int i = 0; i < n; ++i) {
    const double a = 360.0 * i / n, b = 360.0 * (i + 1) / n;
    area += 0.5 * (p.rate(a) + p.rate(b)) * (b - a);
  }
  CHECK(area == doctest::Approx(368.0).epsilon(1e-6));
}

TEST_CASE("malformed profiles are rejected") {
  CHECK_THROWS_AS(IntensityProfile({{0, 1}, {10, 1}}, 0.0), ValidationError);
  CHECK_THROWS_AS(IntensityProfile({{0, 1}, {10, 2}}, 1.5), ValidationError);
  CHECK_THROWS_AS(IntensityProfile({{10, 1}, {0, 1}}, 1.0), ValidationError);
  CHECK_THROWS_AS(IntensityProfile({{0, -1}, {10, 1}}, 1.0), ValidationError);
}

TEST_CASE("sample_arrivals rejects a non-positive majorant") {
  CHECK_THROWS_AS(sample_arrivals(IntensityProfile{}, 368, 1), ContractViolation);
}

TEST_CASE("constant intensity gives exponential inter-arrival times (KS, alpha 0.01)") {
  const double c = 1.0;
  const IntensityProfile p({{0.0, c}, {12000.0, c}}, c);
  Rng rng = make_stream(99, Stream::Arrivals);
  auto times = thin_once(p, rng);
  REQUIRE(times.size() > 10000);
  std::vector<double> gaps;
  double prev = 0.0;
  for (std::size_t i = 0; i < 10000; ++i) {
    gaps.push_back(times[i] - prev);
    prev = times[i];
  }
  std::sort(gaps.begin(), gaps.end());
  const double n = static_cast<double>(gaps.size());
  double d = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double f = 1.0 - std::exp(-c * gaps[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("zero-intensity stretch produces no arrivals") {
  const IntensityProfile p({{0.0, 2.0}, {180.0, 2.0}, {180.0001, 0.0}, {360.0, 0.0}}, 2.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = make_stream(seed, Stream::Arrivals);
    const auto t = thin_once(p, rng);
    REQUIRE_FALSE(t.empty());
    CHECK(t.back() <= 180.0001);
  }
}

TEST_CASE("acceptance ratio matches the mean intensity over the majorant") {
  const IntensityProfile p = default_profile();
  const double expected = p.integral() / (p.lambda_max() * (p.end() - p.start()));
  ThinningStats stats;
  Rng rng = make_stream(5, Stream::Arrivals);
  while (stats.proposals < 100000) thin_once(p, rng, &stats);
  const double ratio = static_cast<double>(stats.accepted) / stats.proposals;
  CHECK(std::fabs(ratio - expected) / expected < 0.02);
}

TEST_CASE("sample_arrivals returns exactly n sorted times in the session") {
  const IntensityProfile p = default_profile();
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const ArrivalSample s = sample_arrivals(p, 368, seed);
    CHECK(s.times.size() == 368);
    CHECK(std::is_sorted(s.times.begin(), s.times.end()));
    CHECK(s.times.front() >= 0.0);
    CHECK(s.times.back() <= 360.0);
    CHECK(s.attempts >= 1);
    CHECK(s.attempts <= kMaxArrivalAttempts);
    CHECK(sample_arrivals(p, 368, seed).times == s.times);
  }
  CHECK(sample_arrivals(p, 368, 1).times != sample_arrivals(p, 368, 2).times);
}

TEST_CASE("first-trajectory counts average near the expected 368") {
  const IntensityProfile p = default_profile();
  double total = 0.0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    Rng rng = make_stream(static_cast<std::uint64_t>(s), Stream::Arrivals);
    total += static_cast<double>(thin_once(p, rng).size());
  }
  const double mean = total / seeds;
  CHECK(std::fabs(mean - 368.0) <= 2.0 * std::sqrt(368.0));
}
