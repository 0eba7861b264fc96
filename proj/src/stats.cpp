#include "opdsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace opdsim {
namespace {

// Continued fraction for I_x(a, b), modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  return h;
}

std::vector<double> sorted_copy(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) {
    if (xs.empty()) throw std::invalid_argument("std of empty sample");
    return 0.0;
  }
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile(std::span<const double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile level outside [0,1]");
  const auto v = sorted_copy(xs);
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(std::span<const double> xs) { return quantile(xs, 0.5); }

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta: a and b must be positive");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete beta: x outside [0,1]");
  if (x == 0.0 || x == 1.0) return x;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t_cdf: df must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

SampleSummary summarize_sample(std::span<const double> xs) {
  // Summing in sorted order makes the result independent of input order.
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  return {mean(sorted), sample_std(sorted), sorted.size()};
}

ComparisonResult welch_t(std::span<const double> a, std::span<const double> b, std::string metric) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch_t: each sample needs at least two values");
  ComparisonResult r;
  r.metric = std::move(metric);
  r.a = summarize_sample(a);
  r.b = summarize_sample(b);
  const double na = static_cast<double>(r.a.n);
  const double nb = static_cast<double>(r.b.n);
  const double va = r.a.std * r.a.std / na;
  const double vb = r.b.std * r.b.std / nb;
  const double diff = r.a.mean - r.b.mean;
  const double pooled =
      std::sqrt(((na - 1.0) * r.a.std * r.a.std + (nb - 1.0) * r.b.std * r.b.std) / (na + nb - 2.0));

  if (va + vb == 0.0) {
    r.degenerate = true;
    r.df = na + nb - 2.0;
    if (diff == 0.0) {
      r.t_stat = 0.0;
      r.p_value = 1.0;
      r.cohens_d = 0.0;
    } else {
      constexpr double inf = std::numeric_limits<double>::infinity();
      r.t_stat = diff > 0 ? inf : -inf;
      r.p_value = 0.0;
      r.cohens_d = r.t_stat;
    }
    return r;
  }

  r.t_stat = diff / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  // Two-sided tail computed directly to keep precision for large |t|.
  r.p_value = std::clamp(regularized_incomplete_beta(r.df / 2.0, 0.5, r.df / (r.df + r.t_stat * r.t_stat)), 0.0, 1.0);
  r.cohens_d = diff / pooled;
  return r;
}

WilsonInterval wilson_ci(std::size_t successes, std::size_t n, double z) {
  if (n == 0) throw std::invalid_argument("wilson_ci: n must be positive");
  if (successes > n) throw std::invalid_argument("wilson_ci: successes exceed n");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  WilsonInterval w{successes, n, p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) w.lo = 0.0;
  if (successes == n) w.hi = 1.0;
  return w;
}

}  // namespace opdsim
