#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cloudrank/numeric.hpp"
#include "cloudrank/simplex.hpp"

namespace cloudrank {

// How hyper-entropy balance constraints are paired. AllPairs balances every
// pair of criteria; Fixed balances each criterion against one chosen
// reference column.
struct ReferencePolicy {
  enum class Kind { AllPairs, Fixed };
  Kind kind = Kind::AllPairs;
  std::size_t reference = 0;
};

struct WeightSolution {
  std::vector<double> weights;
  double xi = 0.0;
  // Criteria whose hyper-entropy is zero for every alternative. The LP is
  // free to dump all weight on such a column, so reports flag them.
  std::vector<std::size_t> zero_he_columns;
};

// Assembles the weight program over variables (w_1..w_M, xi):
// minimize xi subject to |he(i,j) w_j - he(i,j') w_j'| <= xi for the paired
// columns in every row, sum w = 1, w >= 0, xi >= 0.
inline LpProblem build_weight_lp(const RealMatrix& he, const ReferencePolicy& policy = {}) {
  const std::size_t n = he.rows;
  const std::size_t m = he.cols;
  if (n < 1) {
    throw std::invalid_argument("build_weight_lp: need at least one alternative row");
  }
  if (m < 2) {
    throw std::invalid_argument("build_weight_lp: need at least two criteria");
  }
  for (double v : he.data) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("build_weight_lp: hyper-entropies must be finite and >= 0");
    }
  }
  if (policy.kind == ReferencePolicy::Kind::Fixed && policy.reference >= m) {
    throw std::invalid_argument("build_weight_lp: reference criterion out of range");
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (policy.kind == ReferencePolicy::Kind::AllPairs) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) pairs.emplace_back(j, k);
    }
  } else {
    for (std::size_t j = 0; j < m; ++j) {
      if (j != policy.reference) pairs.emplace_back(j, policy.reference);
    }
  }

  LpProblem lp;
  lp.objective.assign(m + 1, 0.0);
  lp.objective[m] = 1.0;
  lp.constraints.reserve(2 * n * pairs.size() + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, k] : pairs) {
      LpConstraint upper;
      upper.coeffs.assign(m + 1, 0.0);
      upper.coeffs[j] = he.at(i, j);
      upper.coeffs[k] = -he.at(i, k);
      upper.coeffs[m] = -1.0;
      upper.relation = Relation::LessEq;
      upper.rhs = 0.0;
      LpConstraint lower = upper;
      lower.coeffs[j] = -he.at(i, j);
      lower.coeffs[k] = he.at(i, k);
      lp.constraints.push_back(std::move(upper));
      lp.constraints.push_back(std::move(lower));
    }
  }
  LpConstraint sum_to_one;
  sum_to_one.coeffs.assign(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) sum_to_one.coeffs[j] = 1.0;
  sum_to_one.relation = Relation::Equal;
  sum_to_one.rhs = 1.0;
  lp.constraints.push_back(std::move(sum_to_one));
  return lp;
}

inline WeightSolution derive_weights(const RealMatrix& he, const ReferencePolicy& policy = {}) {
  const LpProblem lp = build_weight_lp(he, policy);
  const LpSolution sol = solve_lp(lp);
  WeightSolution out;
  out.weights.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(he.cols));
  out.xi = sol.x[he.cols];
  double total = 0.0;
  for (double w : out.weights) total += w;
  for (double& w : out.weights) w /= total;
  for (std::size_t j = 0; j < he.cols; ++j) {
    bool all_zero = true;
    for (std::size_t i = 0; i < he.rows && all_zero; ++i) {
      if (he.at(i, j) != 0.0) all_zero = false;
    }
    if (all_zero) out.zero_he_columns.push_back(j);
  }
  return out;
}

}  // namespace cloudrank
