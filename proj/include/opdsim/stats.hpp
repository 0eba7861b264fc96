#pragma once

// Descriptive statistics, Welch's t-test, Cohen's d and Wilson intervals.

#include <cstddef>
#include <span>
#include <string>

namespace opdsim {

double mean(std::span<const double> xs);
// Sample standard deviation (n - 1); 0 for a single value.
double sample_std(std::span<const double> xs);
double median(std::span<const double> xs);
/// Linear-interpolation quantile, h = (n - 1) q.
double quantile(std::span<const double> xs, double q);

/// I_x(a, b) by Lentz's continued fraction, |error| < 1e-10.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);

struct SampleSummary {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
};
// Bitwise independent of the order of `xs`.
SampleSummary summarize_sample(std::span<const double> xs);

struct ComparisonResult {
  std::string metric;
  SampleSummary a;
  SampleSummary b;
  double t_stat = 0.0;
  double df = 0.0;
  double p_value = 1.0;  // two-sided
  double cohens_d = 0.0;
  // Both samples have zero variance, so t is not defined.
  bool degenerate = false;
};

/// Welch's unequal-variance t-test with Welch-Satterthwaite df and Cohen's d
/// on the pooled SD. Throws std::invalid_argument when a sample has fewer
/// than two values.
ComparisonResult welch_t(std::span<const double> a, std::span<const double> b, std::string metric = {});

struct WilsonInterval {
  std::size_t successes = 0;
  std::size_t n = 0;
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval. Throws std::invalid_argument when n == 0 or
/// successes > n.
WilsonInterval wilson_ci(std::size_t successes, std::size_t n, double z = 1.96);

}  // namespace opdsim
