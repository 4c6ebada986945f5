// Builds a small synthetic survey in memory and walks it through the whole
// pipeline: cell aggregation, weight derivation, weighting, ideals and
// ranking scores.

#include <cstdio>
#include <vector>

#include "cloudrank/topsis.hpp"

int main() {
  using namespace cloudrank;

  SurveyData survey;
  survey.experts = {"e1", "e2", "e3"};
  survey.alternatives = {"laptop", "tablet", "phone"};
  survey.criteria = {{"performance", "compute performance", Direction::Benefit},
                     {"battery", "battery life", Direction::Benefit},
                     {"price", "purchase price", Direction::Cost}};

  const double ratings[3][3][3][2] = {
      // expert e1
      {{{70, 85}, {40, 55}, {60, 75}},
       {{45, 60}, {65, 80}, {35, 50}},
       {{50, 70}, {55, 70}, {25, 45}}},
      // expert e2
      {{{72, 88}, {30, 70}, {50, 90}},
       {{48, 62}, {55, 95}, {25, 65}},
       {{54, 68}, {45, 85}, {15, 55}}},
      // expert e3
      {{{68, 80}, {45, 50}, {58, 72}},
       {{44, 58}, {68, 74}, {36, 48}},
       {{52, 64}, {58, 66}, {28, 40}}},
  };
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        survey.ratings[{k, i, j}] = {ratings[k][i][j][0], ratings[k][i][j][1]};
      }
    }
  }

  PipelineOptions options;
  const PipelineReport report = run_pipeline(survey, options);

  std::printf("criteria weights (xi = %.4f):\n", report.weights.xi);
  for (std::size_t j = 0; j < survey.criteria.size(); ++j) {
    std::printf("  %-12s %.4f\n", survey.criteria[j].id.c_str(), report.weights.weights[j]);
  }

  std::printf("\nranking:\n");
  for (std::size_t i = 0; i < survey.alternatives.size(); ++i) {
    std::printf("  %-8s rank %zu  score %.4f  (d+ %.4f, d- %.4f)\n",
                survey.alternatives[i].c_str(), report.ranks[i], report.rs[i], report.d_plus[i],
                report.d_minus[i]);
  }

  const std::vector<std::size_t> baseline = rank_iaa_baseline(survey, report.weights.weights);
  std::printf("\nagreement-centroid baseline ranks:\n");
  for (std::size_t i = 0; i < survey.alternatives.size(); ++i) {
    std::printf("  %-8s rank %zu\n", survey.alternatives[i].c_str(), baseline[i]);
  }
  return 0;
}
