#pragma once

// Shared statistics helpers for the unit suites.

#include <algorithm>
#include <cmath>
#include <vector>

namespace pens::testsupport {

struct MeanStderr {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  const double n = double(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

/// One-sample Kolmogorov-Smirnov statistic against the uniform CDF on [0,1].
inline double ks_statistic_uniform(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = double(xs.size());
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double cdf = xs[i];
    d = std::max(d, std::abs(double(i + 1) / n - cdf));
    d = std::max(d, std::abs(cdf - double(i) / n));
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic_two_sample(std::vector<double> a,
                                      std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / double(a.size()) -
                             double(j) / double(b.size())));
  }
  return d;
}

/// Asymptotic one-sample KS critical value; c(alpha) = 1.6276 at alpha=0.01.
inline double ks_critical_one_sample(size_t n, double c_alpha = 1.6276) {
  return c_alpha / std::sqrt(double(n));
}

/// Asymptotic two-sample KS critical value.
inline double ks_critical_two_sample(size_t n, size_t m,
                                     double c_alpha = 1.6276) {
  return c_alpha * std::sqrt((double(n) + double(m)) / (double(n) * double(m)));
}

}  // namespace pens::testsupport
