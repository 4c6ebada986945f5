#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace cloudrank {

// Arithmetic mean with an exact short-circuit for constant input. The
// short-circuit matters: summing K identical doubles and dividing by K can
// land one ulp off, and several degenerate contracts downstream (identical
// panels, constant pools) require deviations of exactly zero.
inline double mean(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("mean: empty input");
  }
  const double first = values.front();
  if (std::all_of(values.begin(), values.end(),
                  [first](double v) { return v == first; })) {
    return first;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

inline double mean(const std::vector<double>& values) {
  return mean(std::span<const double>(values));
}

// Population variance (divides by N), sharing mean()'s exactness guarantee.
inline double population_variance(std::span<const double> values) {
  const double m = mean(values);
  std::vector<double> sq;
  sq.reserve(values.size());
  for (double v : values) {
    const double d = v - m;
    sq.push_back(d * d);
  }
  return mean(sq);
}

// Dense row-major matrix of reals; just enough surface for the weight model.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

}  // namespace cloudrank
