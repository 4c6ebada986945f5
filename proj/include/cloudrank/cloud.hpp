#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cloudrank/numeric.hpp"
#include "cloudrank/rng.hpp"

namespace cloudrank {

// A normal cloud model. ex is the expectation (center of the drops), en the
// entropy (spread), he the hyper-entropy (dispersion of the spread, i.e.
// second-order uncertainty). en and he are non-negative; all finite.
struct NormalCloud {
  double ex = 0.0;
  double en = 0.0;
  double he = 0.0;

  friend bool operator==(const NormalCloud&, const NormalCloud&) = default;
};

// One sampled cloud drop: position x with certainty degree y in (0, 1].
struct CloudDrop {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const CloudDrop&, const CloudDrop&) = default;
};

// Closed interval [lower, upper], lower <= upper.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Gaussian encoding of an interval rating: mean and standard deviation.
struct GaussianRating {
  double mean = 0.0;
  double sigma = 0.0;

  friend bool operator==(const GaussianRating&, const GaussianRating&) = default;
};

enum class Ordering { Greater, Equal, Less };

// Distance variants between clouds. Mixed is the default form used by the
// ranking pipeline: squared difference in ex, absolute differences in en/he
// under one square root. Config files and the CLI spell it "paper".
enum class DistanceMeasure { Mixed, Euclidean, Hamming };

inline void require_valid(const NormalCloud& c, const char* where) {
  if (!std::isfinite(c.ex) || !std::isfinite(c.en) || !std::isfinite(c.he) ||
      c.en < 0.0 || c.he < 0.0) {
    throw std::invalid_argument(std::string(where) +
                                ": cloud parameters must be finite with en >= 0 and he >= 0");
  }
}

inline void require_valid(const Interval& iv, const char* where) {
  if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper) || iv.lower > iv.upper) {
    throw std::invalid_argument(std::string(where) +
                                ": interval must be finite with lower <= upper");
  }
}

// Certainty degree of position x under a cloud centered at ex whose entropy
// realisation is en_prime (callers pass |En'|). The en_prime = 0 limit is the
// indicator of x == ex.
inline double certainty_degree(double x, double ex, double en_prime) {
  if (!std::isfinite(x) || !std::isfinite(ex) || !std::isfinite(en_prime)) {
    throw std::invalid_argument("certainty_degree: non-finite input");
  }
  if (en_prime < 0.0) {
    throw std::invalid_argument("certainty_degree: en_prime must be non-negative");
  }
  if (en_prime == 0.0) {
    return x == ex ? 1.0 : 0.0;
  }
  const double d = x - ex;
  return std::exp(-(d * d) / (2.0 * en_prime * en_prime));
}

// Forward cloud generator: n drops from the cloud. Each drop perturbs the
// entropy (En' ~ Normal(en, he^2), folded to |En'|), samples
// x ~ Normal(ex, En'^2) and scores it with the certainty degree. Same seed,
// same drops, bit for bit.
inline std::vector<CloudDrop> generate_drops(const NormalCloud& cloud, std::size_t n,
                                             std::uint64_t seed) {
  require_valid(cloud, "generate_drops");
  if (n == 0) {
    throw std::invalid_argument("generate_drops: drop count must be at least 1");
  }
  SplitMix64 rng(seed);
  std::vector<CloudDrop> drops;
  drops.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double en_prime = std::abs(rng.normal(cloud.en, cloud.he));
    const double x = rng.normal(cloud.ex, en_prime);
    drops.push_back({x, certainty_degree(x, cloud.ex, en_prime)});
  }
  return drops;
}

// Backward cloud generator for drops without certainty degrees:
//   ex = mean, en = sqrt(pi/2) * mean absolute deviation,
//   he = sqrt(|S^2 - en^2|) with S^2 the population variance.
inline NormalCloud backward_generate(std::span<const double> xs) {
  if (xs.empty()) {
    throw std::invalid_argument("backward_generate: empty sample");
  }
  const double ex = mean(xs);
  std::vector<double> abs_dev;
  abs_dev.reserve(xs.size());
  for (double x : xs) abs_dev.push_back(std::abs(x - ex));
  const double en = std::sqrt(std::numbers::pi / 2.0) * mean(abs_dev);
  const double variance = population_variance(xs);
  const double he = std::sqrt(std::abs(variance - en * en));
  return {ex, en, he};
}

inline NormalCloud backward_generate(const std::vector<double>& xs) {
  return backward_generate(std::span<const double>(xs));
}

// Scalar multiplication: (lambda*ex, sqrt(lambda)*en, sqrt(lambda)*he).
inline NormalCloud scale(const NormalCloud& cloud, double lambda) {
  require_valid(cloud, "scale");
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw std::invalid_argument("scale: factor must be positive and non-zero");
  }
  const double root = std::sqrt(lambda);
  return {lambda * cloud.ex, root * cloud.en, root * cloud.he};
}

// The cloud's effective support [ex - 3en, ex + 3en].
inline Interval to_interval(const NormalCloud& cloud) {
  require_valid(cloud, "to_interval");
  return {cloud.ex - 3.0 * cloud.en, cloud.ex + 3.0 * cloud.en};
}

// Orders two clouds. The interval-based score over [ex +/- 3en] reduces
// algebraically to 2*(ex1 - ex2); comparing expectations directly keeps the
// relation exactly antisymmetric under floating point. Ties fall through to
// lower entropy, then lower hyper-entropy.
inline Ordering compare(const NormalCloud& a, const NormalCloud& b) {
  require_valid(a, "compare");
  require_valid(b, "compare");
  if (a.ex != b.ex) {
    return a.ex > b.ex ? Ordering::Greater : Ordering::Less;
  }
  if (a.en != b.en) {
    return a.en < b.en ? Ordering::Greater : Ordering::Less;
  }
  if (a.he != b.he) {
    return a.he < b.he ? Ordering::Greater : Ordering::Less;
  }
  return Ordering::Equal;
}

inline double distance(const NormalCloud& a, const NormalCloud& b, DistanceMeasure measure) {
  require_valid(a, "distance");
  require_valid(b, "distance");
  const double dex = a.ex - b.ex;
  const double den = a.en - b.en;
  const double dhe = a.he - b.he;
  switch (measure) {
    case DistanceMeasure::Mixed:
      return std::sqrt(dex * dex + std::abs(den) + std::abs(dhe));
    case DistanceMeasure::Euclidean:
      return std::sqrt(dex * dex + den * den + dhe * dhe);
    case DistanceMeasure::Hamming:
      return std::abs(dex) + std::abs(den) + std::abs(dhe);
  }
  throw std::invalid_argument("distance: unknown measure");
}

}  // namespace cloudrank
