#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "cloudrank/numeric.hpp"

namespace cloudrank {

struct SummaryStats {
  double mean = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
};

// Percentile of a sorted sample by linear interpolation between order
// statistics at rank (n-1)*p (the numpy "linear" / R type 7 rule).
inline double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw std::invalid_argument("percentile_sorted: empty sample");
  }
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("percentile_sorted: p must lie in [0, 1]");
  }
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline SummaryStats summarize_sample(std::span<const double> xs) {
  if (xs.empty()) {
    throw std::invalid_argument("summarize_sample: empty sample");
  }
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  return {mean(xs), percentile_sorted(sorted, 0.25), percentile_sorted(sorted, 0.50),
          percentile_sorted(sorted, 0.75)};
}

struct TTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double degrees_of_freedom = 0.0;
};

// Two-sided paired t test on equal-length samples. Degenerate cases are
// resolved before touching the distribution: identical pairs give (0, 1),
// a constant non-zero difference gives (+/-inf, 0).
inline TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("paired_t_test: samples must have equal length");
  }
  if (a.size() < 2) {
    throw std::invalid_argument("paired_t_test: need at least two pairs");
  }
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
  const double md = mean(diff);
  double ss = 0.0;
  for (double d : diff) ss += (d - md) * (d - md);
  const double df = static_cast<double>(n - 1);
  const double sd = std::sqrt(ss / df);
  if (sd == 0.0) {
    if (md == 0.0) return {0.0, 1.0, df};
    const double inf = std::numeric_limits<double>::infinity();
    return {md > 0.0 ? inf : -inf, 0.0, df};
  }
  const double t = md / (sd / std::sqrt(static_cast<double>(n)));
  boost::math::students_t_distribution<double> dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return {t, p, df};
}

// 1-based ranks with ties resolved to the average rank of the tied block.
inline std::vector<double> midranks(std::span<const double> xs) {
  if (xs.empty()) {
    throw std::invalid_argument("midranks: empty sample");
  }
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

struct UndefinedCorrelationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Spearman rank correlation: Pearson correlation of the midranks. Throws
// when either sample is constant (zero rank variance).
inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("spearman: samples must have equal length");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("spearman: need at least two observations");
  }
  const std::vector<double> rx = midranks(x);
  const std::vector<double> ry = midranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelationError("spearman: constant sample has no rank ordering");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace cloudrank
