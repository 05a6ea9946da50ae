#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "minordiff/rng.hpp"

namespace minordiff {

struct MomentSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double mean_se = 0.0;
  double var = 0.0;     // unbiased (n-1) sample variance
  double var_se = 0.0;  // from the fourth central moment
  double skew = 0.0;    // m3 / s^3  (biased plug-in; noted in the report)
  double kurt = 0.0;    // m4 / s^4
  double m5 = 0.0;      // standardized
  double m6 = 0.0;
};

inline MomentSummary summarize(const std::vector<double>& xs) {
  MomentSummary s;
  s.n = xs.size();
  if (s.n < 2) throw std::invalid_argument("summarize needs at least two samples");
  const double n = double(s.n);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0;
  for (double x : xs) {
    const double d = x - mean, d2 = d * d;
    c2 += d2;
    c3 += d2 * d;
    c4 += d2 * d2;
    c5 += d2 * d2 * d;
    c6 += d2 * d2 * d2;
  }
  c2 /= n; c3 /= n; c4 /= n; c5 /= n; c6 /= n;
  s.mean = mean;
  s.var = c2 * n / (n - 1.0);
  s.mean_se = std::sqrt(s.var / n);
  // Var(s^2) = (m4 - s^4 (n-3)/(n-1)) / n
  const double v4 = (c4 - s.var * s.var * (n - 3.0) / (n - 1.0)) / n;
  s.var_se = std::sqrt(std::max(0.0, v4));
  if (c2 > 0.0) {
    const double sd = std::sqrt(c2);
    s.skew = c3 / (sd * sd * sd);
    s.kurt = c4 / (c2 * c2);
    s.m5 = c5 / (c2 * c2 * sd);
    s.m6 = c6 / (c2 * c2 * c2);
  }
  return s;
}

struct BootstrapCi {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Percentile bootstrap at the given confidence for a statistic of the
/// sample; seeded and therefore reproducible.
template <class Stat>
BootstrapCi bootstrap_ci(const std::vector<double>& xs, Stat&& stat, double confidence,
                         std::uint64_t seed, std::uint64_t stream, int resamples = 2000) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("bootstrap needs at least two samples");
  Philox rng(seed, stream);
  std::vector<double> draws(resamples);
  std::vector<double> resample(n);
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i)
      resample[i] = xs[rng.next_u64() % n];
    draws[r] = stat(resample);
  }
  std::sort(draws.begin(), draws.end());
  const double alpha = 1.0 - confidence;
  auto pick = [&](double q) {
    const double pos = q * (resamples - 1);
    const int i = int(pos);
    const double frac = pos - i;
    return i + 1 < resamples ? draws[i] * (1.0 - frac) + draws[i + 1] * frac : draws[i];
  };
  return {pick(alpha / 2.0), pick(1.0 - alpha / 2.0)};
}

inline double standardized_moment(const std::vector<double>& xs, int k) {
  const double n = double(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double c2 = 0.0, ck = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    c2 += d * d;
    ck += std::pow(d, k);
  }
  c2 /= n; ck /= n;
  if (c2 <= 0.0) return 0.0;
  return ck / std::pow(c2, 0.5 * k);
}

/// Least-squares slope of log|err| against log N; used for rate reports.
inline double loglog_slope(const std::vector<double>& ns, const std::vector<double>& errs) {
  const std::size_t k = ns.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double x = std::log(ns[i]);
    const double y = std::log(std::max(errs[i], 1e-300));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double denom = k * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (k * sxy - sx * sy) / denom;
}

}  // namespace minordiff
