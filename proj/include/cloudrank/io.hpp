#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "cloudrank/aggregate.hpp"
#include "cloudrank/cloud.hpp"
#include "cloudrank/experiment.hpp"
#include "cloudrank/topsis.hpp"
#include "cloudrank/weights.hpp"

namespace cloudrank {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal rendering, used for all CSV output.
inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf.data(), ptr);
}

// Rounds to 6 significant digits. Report JSON stores the rounded doubles so
// serialization is byte-stable and diffs stay readable.
inline double round6(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.6g", v);
  return std::strtod(buf.data(), nullptr);
}

inline std::string_view distance_measure_tag(DistanceMeasure m) {
  switch (m) {
    case DistanceMeasure::Mixed: return "paper";
    case DistanceMeasure::Euclidean: return "euclidean";
    case DistanceMeasure::Hamming: return "hamming";
  }
  throw std::invalid_argument("distance_measure_tag: unknown measure");
}

inline DistanceMeasure parse_distance_measure(std::string_view tag) {
  if (tag == "paper") return DistanceMeasure::Mixed;
  if (tag == "euclidean") return DistanceMeasure::Euclidean;
  if (tag == "hamming") return DistanceMeasure::Hamming;
  throw ValidationError("unknown distance measure '" + std::string(tag) +
                        "' (expected paper, euclidean or hamming)");
}

struct RunConfig {
  std::vector<CriterionSpec> criteria;
  Interval rating_scale{0.0, 100.0};
  ReferencePolicy reference_policy;
  DistanceMeasure distance_measure = DistanceMeasure::Mixed;
  std::uint64_t seed = 42;
  std::size_t drops = 5000;
};

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path + ": cannot open config file");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }

  RunConfig config;
  try {
    if (!doc.contains("criteria") || !doc["criteria"].is_array() || doc["criteria"].empty()) {
      throw ValidationError(path + ": config needs a non-empty criteria array");
    }
    for (const auto& c : doc["criteria"]) {
      CriterionSpec spec;
      spec.id = c.at("id").get<std::string>();
      spec.label = c.value("label", spec.id);
      const std::string dir = c.value("direction", "benefit");
      if (dir == "benefit") {
        spec.direction = Direction::Benefit;
      } else if (dir == "cost") {
        spec.direction = Direction::Cost;
      } else {
        throw ValidationError(path + ": criterion '" + spec.id +
                              "' has unknown direction '" + dir + "'");
      }
      for (const CriterionSpec& seen : config.criteria) {
        if (seen.id == spec.id) {
          throw ValidationError(path + ": duplicate criterion id '" + spec.id + "'");
        }
      }
      config.criteria.push_back(std::move(spec));
    }
    if (doc.contains("rating_scale")) {
      config.rating_scale.lower = doc["rating_scale"].at("lower").get<double>();
      config.rating_scale.upper = doc["rating_scale"].at("upper").get<double>();
    }
    require_valid(config.rating_scale, "load_config");
    if (config.rating_scale.width() <= 0.0) {
      throw ValidationError(path + ": rating scale must have positive width");
    }
    const std::string policy = doc.value("reference_policy", "all-pairs");
    if (policy == "all-pairs") {
      config.reference_policy.kind = ReferencePolicy::Kind::AllPairs;
    } else if (policy == "fixed") {
      config.reference_policy.kind = ReferencePolicy::Kind::Fixed;
      const std::string ref = doc.value("reference_criterion", "");
      bool found = false;
      for (std::size_t j = 0; j < config.criteria.size(); ++j) {
        if (config.criteria[j].id == ref) {
          config.reference_policy.reference = j;
          found = true;
          break;
        }
      }
      if (!found) {
        throw ValidationError(path + ": fixed reference policy needs reference_criterion "
                              "set to one of the criterion ids");
      }
    } else {
      throw ValidationError(path + ": unknown reference_policy '" + policy +
                            "' (expected all-pairs or fixed)");
    }
    config.distance_measure = parse_distance_measure(doc.value("distance_measure", "paper"));
    config.seed = doc.value("seed", std::uint64_t{42});
    config.drops = doc.value("drops", std::size_t{5000});
    if (config.drops < 1) {
      throw ValidationError(path + ": drops must be at least 1");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return config;
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(current);
  return fields;
}

inline double parse_double_field(const std::string& field, const std::string& path,
                                 std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": '" + field +
                     "' is not a finite number");
  }
  return v;
}

}  // namespace detail

constexpr std::string_view kRatingsHeader = "expert_id,alternative_id,criterion_id,lower,upper";

// Reads one rating per row. Experts and alternatives are collected from the
// file and sorted lexicographically; criteria come from the config in config
// order. Every (alternative, criterion) cell must end up with at least one
// rating.
inline SurveyData parse_ratings(const std::string& path, const RunConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path + ": cannot open ratings file");
  }
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw ParseError(path + ": empty ratings file");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRatingsHeader) {
    throw ParseError(path + ":1: header must be exactly '" + std::string(kRatingsHeader) + "'");
  }

  struct Row {
    std::string expert;
    std::string alternative;
    std::size_t criterion = 0;
    Interval rating;
    std::size_t line_no = 0;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = detail::split_fields(line);
    if (fields.size() != 5) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 5 fields, got " +
                       std::to_string(fields.size()));
    }
    Row row;
    row.expert = fields[0];
    row.alternative = fields[1];
    row.line_no = line_no;
    if (row.expert.empty() || row.alternative.empty() || fields[2].empty()) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": empty identifier field");
    }
    bool found = false;
    for (std::size_t j = 0; j < config.criteria.size(); ++j) {
      if (config.criteria[j].id == fields[2]) {
        row.criterion = j;
        found = true;
        break;
      }
    }
    if (!found) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": unknown criterion id '" +
                            fields[2] + "'");
    }
    row.rating.lower = detail::parse_double_field(fields[3], path, line_no);
    row.rating.upper = detail::parse_double_field(fields[4], path, line_no);
    if (row.rating.lower > row.rating.upper) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": inverted interval for (" +
                            row.expert + ", " + row.alternative + ", " + fields[2] + ")");
    }
    if (row.rating.lower < config.rating_scale.lower ||
        row.rating.upper > config.rating_scale.upper) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": rating for (" + row.expert +
                            ", " + row.alternative + ", " + fields[2] +
                            ") lies outside the rating scale [" +
                            format_double(config.rating_scale.lower) + ", " +
                            format_double(config.rating_scale.upper) + "]");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(path + ": no rating rows");
  }

  SurveyData survey;
  survey.criteria = config.criteria;
  for (const Row& row : rows) {
    survey.experts.push_back(row.expert);
    survey.alternatives.push_back(row.alternative);
  }
  std::sort(survey.experts.begin(), survey.experts.end());
  survey.experts.erase(std::unique(survey.experts.begin(), survey.experts.end()),
                       survey.experts.end());
  std::sort(survey.alternatives.begin(), survey.alternatives.end());
  survey.alternatives.erase(std::unique(survey.alternatives.begin(), survey.alternatives.end()),
                            survey.alternatives.end());

  const auto index_of = [](const std::vector<std::string>& ids, const std::string& id) {
    return static_cast<std::size_t>(
        std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  for (const Row& row : rows) {
    const std::array<std::size_t, 3> key{index_of(survey.experts, row.expert),
                                         index_of(survey.alternatives, row.alternative),
                                         row.criterion};
    if (!survey.ratings.emplace(key, row.rating).second) {
      throw ValidationError(path + ":" + std::to_string(row.line_no) + ": duplicate rating for (" +
                            row.expert + ", " + row.alternative + ", " +
                            config.criteria[row.criterion].id + ")");
    }
  }

  std::string missing;
  for (std::size_t i = 0; i < survey.alternatives.size(); ++i) {
    for (std::size_t j = 0; j < survey.criteria.size(); ++j) {
      bool covered = false;
      for (std::size_t k = 0; k < survey.experts.size() && !covered; ++k) {
        covered = survey.ratings.count({k, i, j}) > 0;
      }
      if (!covered) {
        if (!missing.empty()) missing += ", ";
        missing += "(" + survey.alternatives[i] + ", " + survey.criteria[j].id + ")";
      }
    }
  }
  if (!missing.empty()) {
    throw IncompleteSurveyError(path + ": cells without ratings: " + missing);
  }
  return survey;
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw WriteError(path + ": cannot open for writing");
  }
  return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw WriteError(path + ": write failed");
  }
}

}  // namespace detail

inline void emit_ratings(const SurveyData& survey, const std::string& path) {
  std::ofstream out = detail::open_output(path);
  out << kRatingsHeader << '\n';
  for (const auto& [key, iv] : survey.ratings) {
    out << survey.experts[key[0]] << ',' << survey.alternatives[key[1]] << ','
        << survey.criteria[key[2]].id << ',' << format_double(iv.lower) << ','
        << format_double(iv.upper) << '\n';
  }
  detail::finish_output(out, path);
}

inline nlohmann::ordered_json cloud_to_json(const NormalCloud& c) {
  return {{"ex", round6(c.ex)}, {"en", round6(c.en)}, {"he", round6(c.he)}};
}

inline nlohmann::ordered_json matrix_to_json(const DecisionMatrix& matrix) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < matrix.rows; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < matrix.cols; ++j) {
      row.push_back(cloud_to_json(matrix.at(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::ordered_json survey_header_json(const SurveyData& survey) {
  nlohmann::ordered_json doc;
  doc["alternatives"] = survey.alternatives;
  nlohmann::ordered_json criteria = nlohmann::ordered_json::array();
  for (const CriterionSpec& c : survey.criteria) {
    criteria.push_back({{"id", c.id},
                        {"label", c.label},
                        {"direction", c.direction == Direction::Benefit ? "benefit" : "cost"}});
  }
  doc["criteria"] = std::move(criteria);
  return doc;
}

inline nlohmann::ordered_json clouds_to_json(const SurveyData& survey,
                                             const DecisionMatrix& matrix) {
  nlohmann::ordered_json doc = survey_header_json(survey);
  doc["clouds"] = matrix_to_json(matrix);
  return doc;
}

inline nlohmann::ordered_json report_to_json(const SurveyData& survey, const RunConfig& config,
                                             const PipelineReport& report) {
  nlohmann::ordered_json doc = survey_header_json(survey);
  doc["clouds"] = matrix_to_json(report.matrix);

  nlohmann::ordered_json weights;
  nlohmann::ordered_json values = nlohmann::ordered_json::array();
  for (double w : report.weights.weights) values.push_back(round6(w));
  weights["values"] = std::move(values);
  weights["xi"] = round6(report.weights.xi);
  weights["policy"] = config.reference_policy.kind == ReferencePolicy::Kind::AllPairs
                          ? "all-pairs"
                          : "fixed";
  if (config.reference_policy.kind == ReferencePolicy::Kind::Fixed) {
    weights["reference_criterion"] = survey.criteria[config.reference_policy.reference].id;
  }
  nlohmann::ordered_json zero_cols = nlohmann::ordered_json::array();
  for (std::size_t j : report.weights.zero_he_columns) {
    zero_cols.push_back(survey.criteria[j].id);
  }
  weights["zero_hyper_entropy_criteria"] = std::move(zero_cols);
  doc["weights"] = std::move(weights);

  doc["weighted_clouds"] = matrix_to_json(report.weighted);

  nlohmann::ordered_json ideals;
  nlohmann::ordered_json positive = nlohmann::ordered_json::array();
  nlohmann::ordered_json negative = nlohmann::ordered_json::array();
  for (const NormalCloud& c : report.ideals.positive) positive.push_back(cloud_to_json(c));
  for (const NormalCloud& c : report.ideals.negative) negative.push_back(cloud_to_json(c));
  ideals["positive"] = std::move(positive);
  ideals["negative"] = std::move(negative);
  doc["ideals"] = std::move(ideals);

  doc["distance_measure"] = distance_measure_tag(config.distance_measure);
  nlohmann::ordered_json distances;
  nlohmann::ordered_json dp = nlohmann::ordered_json::array();
  nlohmann::ordered_json dm = nlohmann::ordered_json::array();
  for (double v : report.d_plus) dp.push_back(round6(v));
  for (double v : report.d_minus) dm.push_back(round6(v));
  distances["positive"] = std::move(dp);
  distances["negative"] = std::move(dm);
  doc["distances"] = std::move(distances);

  nlohmann::ordered_json rs = nlohmann::ordered_json::array();
  for (double v : report.rs) rs.push_back(round6(v));
  doc["ranking_scores"] = std::move(rs);
  doc["ranks"] = report.ranks;
  return doc;
}

inline void emit_json(const nlohmann::ordered_json& doc, const std::string& path) {
  std::ofstream out = detail::open_output(path);
  out << doc.dump(2) << '\n';
  detail::finish_output(out, path);
}

inline void emit_report(const SurveyData& survey, const RunConfig& config,
                        const PipelineReport& report, const std::string& path) {
  emit_json(report_to_json(survey, config, report), path);
}

inline void emit_plot_drops(const std::vector<CloudDrop>& drops, const std::string& path) {
  std::ofstream out = detail::open_output(path);
  out << "x,y\n";
  for (const CloudDrop& d : drops) {
    out << format_double(d.x) << ',' << format_double(d.y) << '\n';
  }
  detail::finish_output(out, path);
}

inline void emit_plot_membership(const StepFunction& f, const std::string& path) {
  std::ofstream out = detail::open_output(path);
  out << "segment_start,segment_end,level\n";
  for (std::size_t i = 0; i + 1 < f.breakpoints.size(); ++i) {
    out << format_double(f.breakpoints[i]) << ',' << format_double(f.breakpoints[i + 1]) << ','
        << format_double(f.levels[i]) << '\n';
  }
  detail::finish_output(out, path);
}

inline void emit_experiment_records(const std::vector<ProblemRecord>& records,
                                    const std::string& path) {
  std::ofstream out = detail::open_output(path);
  out << "d,p,method,pool_mean,pool_q1,pool_q2,pool_q3,m_mean,m_q1,m_q2,m_q3,s_or\n";
  for (const ProblemRecord& r : records) {
    for (const auto& [method, outcome] : r.outcomes) {
      out << r.panel_size << ',' << r.problem_index << ',' << method_tag(method) << ','
          << format_double(r.pool_stats.mean) << ',' << format_double(r.pool_stats.q1) << ','
          << format_double(r.pool_stats.q2) << ',' << format_double(r.pool_stats.q3) << ','
          << format_double(outcome.stats.mean) << ',' << format_double(outcome.stats.q1) << ','
          << format_double(outcome.stats.q2) << ',' << format_double(outcome.stats.q3) << ','
          << format_double(outcome.s_or) << '\n';
    }
  }
  detail::finish_output(out, path);
}

inline void emit_experiment_summary(const std::vector<MethodSummary>& summaries,
                                    const std::string& path) {
  std::ofstream out = detail::open_output(path);
  out << "# t-tests assume approximately normal paired differences; normality is not "
         "checked automatically\n";
  out << "d,method,mean_s_or,sd_s_or,t_mean,p_mean,t_q1,p_q1,t_q2,p_q2,t_q3,p_q3\n";
  for (const MethodSummary& s : summaries) {
    out << s.panel_size << ',' << method_tag(s.method) << ',' << format_double(s.mean_s_or) << ','
        << format_double(s.sd_s_or) << ',' << format_double(s.t_mean.statistic) << ','
        << format_double(s.t_mean.p_value) << ',' << format_double(s.t_q1.statistic) << ','
        << format_double(s.t_q1.p_value) << ',' << format_double(s.t_q2.statistic) << ','
        << format_double(s.t_q2.p_value) << ',' << format_double(s.t_q3.statistic) << ','
        << format_double(s.t_q3.p_value) << '\n';
  }
  detail::finish_output(out, path);
}

}  // namespace cloudrank
