#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cloudrank/aggregate.hpp"
#include "cloudrank/cloud.hpp"
#include "cloudrank/stats.hpp"
#include "cloudrank/weights.hpp"

namespace cloudrank {

enum class Direction { Benefit, Cost };

struct CriterionSpec {
  std::string id;
  std::string label;
  Direction direction = Direction::Benefit;

  friend bool operator==(const CriterionSpec&, const CriterionSpec&) = default;
};

// Raw survey: every expert may rate any (alternative, criterion) cell with
// one interval. Ratings are keyed by {expert, alternative, criterion} index
// triples into the id lists.
struct SurveyData {
  std::vector<std::string> experts;
  std::vector<std::string> alternatives;
  std::vector<CriterionSpec> criteria;
  std::map<std::array<std::size_t, 3>, Interval> ratings;

  friend bool operator==(const SurveyData&, const SurveyData&) = default;
};

struct DecisionMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<NormalCloud> cells;
  bool weighted = false;

  NormalCloud& at(std::size_t i, std::size_t j) { return cells[i * cols + j]; }
  const NormalCloud& at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
};

struct IdealSolutions {
  std::vector<NormalCloud> positive;
  std::vector<NormalCloud> negative;
};

struct IncompleteSurveyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stage-tagged wrapper so callers can tell which pipeline step rejected the
// input.
struct PipelineError : std::runtime_error {
  std::string stage;

  PipelineError(std::string stage_name, const std::string& message)
      : std::runtime_error(stage_name + ": " + message), stage(std::move(stage_name)) {}
};

inline void validate_survey(const SurveyData& survey, const Interval& rating_scale) {
  require_valid(rating_scale, "validate_survey");
  if (survey.experts.empty() || survey.alternatives.empty() || survey.criteria.empty()) {
    throw std::invalid_argument("validate_survey: experts, alternatives and criteria must be non-empty");
  }
  for (std::size_t j = 0; j < survey.criteria.size(); ++j) {
    for (std::size_t k = j + 1; k < survey.criteria.size(); ++k) {
      if (survey.criteria[j].id == survey.criteria[k].id) {
        throw std::invalid_argument("validate_survey: duplicate criterion id '" +
                                    survey.criteria[j].id + "'");
      }
    }
  }
  for (const auto& [key, iv] : survey.ratings) {
    if (key[0] >= survey.experts.size() || key[1] >= survey.alternatives.size() ||
        key[2] >= survey.criteria.size()) {
      throw std::invalid_argument("validate_survey: rating key out of range");
    }
    require_valid(iv, "validate_survey");
    if (iv.lower < rating_scale.lower || iv.upper > rating_scale.upper) {
      throw std::invalid_argument("validate_survey: rating for (" + survey.alternatives[key[1]] +
                                  ", " + survey.criteria[key[2]].id + ") lies outside the rating scale");
    }
  }
}

// Aggregates every cell's expert intervals into one cloud. A cell nobody
// rated cannot be aggregated and is reported by name.
inline DecisionMatrix build_decision_matrix(const SurveyData& survey) {
  const std::size_t n = survey.alternatives.size();
  const std::size_t m = survey.criteria.size();
  if (n == 0 || m == 0) {
    throw std::invalid_argument("build_decision_matrix: empty survey");
  }
  DecisionMatrix matrix;
  matrix.rows = n;
  matrix.cols = m;
  matrix.cells.assign(n * m, NormalCloud{});
  std::vector<Interval> cell;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      cell.clear();
      for (std::size_t k = 0; k < survey.experts.size(); ++k) {
        const auto it = survey.ratings.find({k, i, j});
        if (it != survey.ratings.end()) cell.push_back(it->second);
      }
      if (cell.empty()) {
        throw IncompleteSurveyError("build_decision_matrix: no ratings for cell (" +
                                    survey.alternatives[i] + ", " + survey.criteria[j].id + ")");
      }
      matrix.at(i, j) = aggregate_clouds(cell);
    }
  }
  return matrix;
}

// Hyper-entropy grid of an unweighted matrix, the weight LP's input.
inline RealMatrix hyper_entropy_grid(const DecisionMatrix& matrix) {
  RealMatrix he(matrix.rows, matrix.cols);
  for (std::size_t i = 0; i < matrix.rows; ++i) {
    for (std::size_t j = 0; j < matrix.cols; ++j) {
      he.at(i, j) = matrix.at(i, j).he;
    }
  }
  return he;
}

inline DecisionMatrix weight_matrix(const DecisionMatrix& matrix,
                                    const std::vector<double>& weights) {
  if (matrix.weighted) {
    throw std::invalid_argument("weight_matrix: matrix is already weighted");
  }
  if (weights.size() != matrix.cols) {
    throw std::invalid_argument("weight_matrix: weight count does not match criteria count");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw std::invalid_argument("weight_matrix: weights must be positive");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("weight_matrix: weights must sum to 1");
  }
  DecisionMatrix out = matrix;
  for (std::size_t i = 0; i < matrix.rows; ++i) {
    for (std::size_t j = 0; j < matrix.cols; ++j) {
      out.at(i, j) = scale(matrix.at(i, j), weights[j]);
    }
  }
  out.weighted = true;
  return out;
}

// Per-criterion extremes over the alternatives, one pass tracking max and
// min together. Benefit criteria take the max as positive ideal; Cost
// criteria swap the roles.
inline IdealSolutions ideal_solutions(const DecisionMatrix& matrix,
                                      const std::vector<CriterionSpec>& criteria) {
  if (!matrix.weighted) {
    throw std::invalid_argument("ideal_solutions: matrix must be weighted first");
  }
  if (criteria.size() != matrix.cols) {
    throw std::invalid_argument("ideal_solutions: criteria count does not match matrix");
  }
  if (matrix.rows == 0) {
    throw std::invalid_argument("ideal_solutions: empty matrix");
  }
  IdealSolutions ideals;
  ideals.positive.reserve(matrix.cols);
  ideals.negative.reserve(matrix.cols);
  for (std::size_t j = 0; j < matrix.cols; ++j) {
    NormalCloud max_cloud = matrix.at(0, j);
    NormalCloud min_cloud = matrix.at(0, j);
    for (std::size_t i = 1; i < matrix.rows; ++i) {
      const NormalCloud& candidate = matrix.at(i, j);
      if (compare(candidate, max_cloud) == Ordering::Greater) {
        max_cloud = candidate;
      } else if (compare(candidate, min_cloud) == Ordering::Less) {
        min_cloud = candidate;
      }
    }
    if (criteria[j].direction == Direction::Benefit) {
      ideals.positive.push_back(max_cloud);
      ideals.negative.push_back(min_cloud);
    } else {
      ideals.positive.push_back(min_cloud);
      ideals.negative.push_back(max_cloud);
    }
  }
  return ideals;
}

inline std::pair<std::vector<double>, std::vector<double>> distances_to_ideals(
    const DecisionMatrix& matrix, const IdealSolutions& ideals, DistanceMeasure measure) {
  if (ideals.positive.size() != matrix.cols || ideals.negative.size() != matrix.cols) {
    throw std::invalid_argument("distances_to_ideals: ideal count does not match matrix");
  }
  std::vector<double> d_plus(matrix.rows, 0.0);
  std::vector<double> d_minus(matrix.rows, 0.0);
  for (std::size_t i = 0; i < matrix.rows; ++i) {
    for (std::size_t j = 0; j < matrix.cols; ++j) {
      d_plus[i] += distance(matrix.at(i, j), ideals.positive[j], measure);
      d_minus[i] += distance(matrix.at(i, j), ideals.negative[j], measure);
    }
  }
  return {std::move(d_plus), std::move(d_minus)};
}

// Ranking score: share of the total ideal distance sitting on the negative
// side. An alternative at zero distance from both ideals scores 0.5.
inline std::vector<double> ranking_scores(const std::vector<double>& d_plus,
                                          const std::vector<double>& d_minus) {
  if (d_plus.size() != d_minus.size()) {
    throw std::invalid_argument("ranking_scores: distance vectors differ in length");
  }
  std::vector<double> rs;
  rs.reserve(d_plus.size());
  for (std::size_t i = 0; i < d_plus.size(); ++i) {
    if (d_plus[i] < 0.0 || d_minus[i] < 0.0) {
      throw std::invalid_argument("ranking_scores: distances must be non-negative");
    }
    const double total = d_plus[i] + d_minus[i];
    rs.push_back(total == 0.0 ? 0.5 : d_minus[i] / total);
  }
  return rs;
}

// Rank 1 goes to the largest score; ties break toward the lower index.
inline std::vector<std::size_t> rank(const std::vector<double>& rs) {
  std::vector<std::size_t> order(rs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rs[a] > rs[b]; });
  std::vector<std::size_t> ranks(rs.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    ranks[order[pos]] = pos + 1;
  }
  return ranks;
}

struct PipelineOptions {
  ReferencePolicy reference_policy;
  DistanceMeasure distance_measure = DistanceMeasure::Mixed;
  Interval rating_scale{0.0, 100.0};
};

struct PipelineReport {
  DecisionMatrix matrix;
  WeightSolution weights;
  DecisionMatrix weighted;
  IdealSolutions ideals;
  std::vector<double> d_plus;
  std::vector<double> d_minus;
  std::vector<double> rs;
  std::vector<std::size_t> ranks;
};

inline PipelineReport run_pipeline(const SurveyData& survey, const PipelineOptions& options) {
  PipelineReport report;
  try {
    validate_survey(survey, options.rating_scale);
  } catch (const std::exception& e) {
    throw PipelineError("validation", e.what());
  }
  try {
    report.matrix = build_decision_matrix(survey);
  } catch (const std::exception& e) {
    throw PipelineError("aggregation", e.what());
  }
  try {
    report.weights = derive_weights(hyper_entropy_grid(report.matrix), options.reference_policy);
  } catch (const std::exception& e) {
    throw PipelineError("weights", e.what());
  }
  try {
    report.weighted = weight_matrix(report.matrix, report.weights.weights);
  } catch (const std::exception& e) {
    std::string message = e.what();
    if (!report.weights.zero_he_columns.empty()) {
      message += " (zero hyper-entropy across all alternatives for:";
      for (std::size_t j : report.weights.zero_he_columns) {
        message += ' ' + survey.criteria[j].id;
      }
      message += ")";
    }
    throw PipelineError("weighting", message);
  }
  try {
    report.ideals = ideal_solutions(report.weighted, survey.criteria);
    auto [d_plus, d_minus] =
        distances_to_ideals(report.weighted, report.ideals, options.distance_measure);
    report.d_plus = std::move(d_plus);
    report.d_minus = std::move(d_minus);
    report.rs = ranking_scores(report.d_plus, report.d_minus);
    report.ranks = rank(report.rs);
  } catch (const std::exception& e) {
    throw PipelineError("ranking", e.what());
  }
  return report;
}

// Baseline ranker: de-fuzzifies each cell's agreement function to its
// centroid and ranks by the weighted centroid sum, Cost criteria negated.
inline std::vector<std::size_t> rank_iaa_baseline(const SurveyData& survey,
                                                  const std::vector<double>& weights) {
  const std::size_t n = survey.alternatives.size();
  const std::size_t m = survey.criteria.size();
  if (weights.size() != m) {
    throw std::invalid_argument("rank_iaa_baseline: weight count does not match criteria count");
  }
  std::vector<double> scores(n, 0.0);
  std::vector<Interval> cell;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      cell.clear();
      for (std::size_t k = 0; k < survey.experts.size(); ++k) {
        const auto it = survey.ratings.find({k, i, j});
        if (it != survey.ratings.end()) cell.push_back(it->second);
      }
      if (cell.empty()) {
        throw IncompleteSurveyError("rank_iaa_baseline: no ratings for cell (" +
                                    survey.alternatives[i] + ", " + survey.criteria[j].id + ")");
      }
      const double centroid = iaa_centroid(iaa_membership(cell));
      scores[i] += weights[j] *
                   (survey.criteria[j].direction == Direction::Cost ? -centroid : centroid);
    }
  }
  return rank(scores);
}

}  // namespace cloudrank
