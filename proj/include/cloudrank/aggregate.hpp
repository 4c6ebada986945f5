#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cloudrank/cloud.hpp"
#include "cloudrank/numeric.hpp"

namespace cloudrank {

// Gaussian encoding of an interval: the interval is read as a 99.73%
// confidence range, so mean = midpoint and sigma = width / 6.
inline GaussianRating interval_to_gaussian(const Interval& iv) {
  require_valid(iv, "interval_to_gaussian");
  return {(iv.lower + iv.upper) / 2.0, (iv.upper - iv.lower) / 6.0};
}

// Aggregates one panel's interval ratings into a normal cloud.
//   ex = mean of the interval means
//   en = mean sigma + root mean squared deviation of the means from ex
//   he = root mean squared deviation of the sigmas from en
// The he term measures sigma spread around en (not around the mean sigma);
// with identical inputs every deviation is zero and he comes out exactly 0.
inline NormalCloud aggregate_clouds(std::span<const Interval> intervals) {
  if (intervals.empty()) {
    throw std::invalid_argument("aggregate_clouds: empty panel");
  }
  std::vector<double> means;
  std::vector<double> sigmas;
  means.reserve(intervals.size());
  sigmas.reserve(intervals.size());
  for (const Interval& iv : intervals) {
    const GaussianRating g = interval_to_gaussian(iv);
    means.push_back(g.mean);
    sigmas.push_back(g.sigma);
  }
  const double ex = mean(means);
  std::vector<double> sq_dev(means.size());
  for (std::size_t k = 0; k < means.size(); ++k) {
    const double d = means[k] - ex;
    sq_dev[k] = d * d;
  }
  const double en = mean(sigmas) + std::sqrt(mean(sq_dev));
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const double d = sigmas[k] - en;
    sq_dev[k] = d * d;
  }
  const double he = std::sqrt(mean(sq_dev));
  return {ex, en, he};
}

inline NormalCloud aggregate_clouds(const std::vector<Interval>& intervals) {
  return aggregate_clouds(std::span<const Interval>(intervals));
}

// Type-1 baseline: average the Gaussian encodings componentwise.
inline GaussianRating aggregate_type1(std::span<const Interval> intervals) {
  if (intervals.empty()) {
    throw std::invalid_argument("aggregate_type1: empty panel");
  }
  std::vector<double> means;
  std::vector<double> sigmas;
  means.reserve(intervals.size());
  sigmas.reserve(intervals.size());
  for (const Interval& iv : intervals) {
    const GaussianRating g = interval_to_gaussian(iv);
    means.push_back(g.mean);
    sigmas.push_back(g.sigma);
  }
  return {mean(means), mean(sigmas)};
}

inline GaussianRating aggregate_type1(const std::vector<Interval>& intervals) {
  return aggregate_type1(std::span<const Interval>(intervals));
}

// Piecewise-constant membership function. levels[i] holds on the half-open
// segment [breakpoints[i], breakpoints[i+1]); the function is 0 before the
// first breakpoint and levels.back() (always 0 for agreement functions) from
// the last breakpoint on.
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> levels;

  double value_at(double x) const {
    if (breakpoints.empty() || x < breakpoints.front()) return 0.0;
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    const std::size_t idx = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    return levels[idx];
  }
};

// Interval agreement membership: at each endpoint the running count of
// covering intervals changes (+1 at a lower endpoint, -1 at an upper one,
// lower endpoints first among ties), and the level is count / n. Counts stay
// integral until the final division, so levels are exact multiples of 1/n.
inline StepFunction iaa_membership(std::span<const Interval> intervals) {
  if (intervals.empty()) {
    throw std::invalid_argument("iaa_membership: empty panel");
  }
  std::vector<std::pair<double, int>> events;
  events.reserve(intervals.size() * 2);
  for (const Interval& iv : intervals) {
    require_valid(iv, "iaa_membership");
    events.emplace_back(iv.lower, +1);
    events.emplace_back(iv.upper, -1);
  }
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  });
  StepFunction f;
  const double n = static_cast<double>(intervals.size());
  long count = 0;
  std::size_t i = 0;
  while (i < events.size()) {
    const double v = events[i].first;
    while (i < events.size() && events[i].first == v) {
      count += events[i].second;
      ++i;
    }
    f.breakpoints.push_back(v);
    f.levels.push_back(static_cast<double>(count) / n);
  }
  return f;
}

inline StepFunction iaa_membership(const std::vector<Interval>& intervals) {
  return iaa_membership(std::span<const Interval>(intervals));
}

struct UndefinedCentroidError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Centroid of a step function: ratio of the first moment to the area.
inline double iaa_centroid(const StepFunction& f) {
  double area = 0.0;
  double moment = 0.0;
  for (std::size_t i = 0; i + 1 < f.breakpoints.size(); ++i) {
    const double a = f.breakpoints[i];
    const double b = f.breakpoints[i + 1];
    const double level = f.levels[i];
    area += level * (b - a);
    moment += level * (b * b - a * a) / 2.0;
  }
  if (area <= 0.0) {
    throw UndefinedCentroidError("iaa_centroid: membership function has zero area");
  }
  return moment / area;
}

// Overlap ratio similarity: |p intersect c| divided by the larger of the two
// relative widths, i.e. min over both ratios. 1 iff the intervals coincide,
// 0 when they are disjoint. Widths must be positive.
inline double overlap_similarity(const Interval& p, const Interval& c) {
  require_valid(p, "overlap_similarity");
  require_valid(c, "overlap_similarity");
  if (p.width() <= 0.0 || c.width() <= 0.0) {
    throw std::invalid_argument("overlap_similarity: intervals must have positive width");
  }
  const double inter = std::min(p.upper, c.upper) - std::max(p.lower, c.lower);
  if (inter <= 0.0) return 0.0;
  return std::min(inter / p.width(), inter / c.width());
}

}  // namespace cloudrank
