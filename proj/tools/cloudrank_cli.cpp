#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cloudrank/cloudrank.hpp"

namespace {

using namespace cloudrank;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> items;
  std::string current;
  for (char ch : csv) {
    if (ch == ',') {
      items.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  items.push_back(current);
  return items;
}

struct SurveyArgs {
  std::string input;
  std::string config;
};

void add_survey_options(CLI::App* cmd, SurveyArgs& args) {
  cmd->add_option("--input", args.input, "ratings CSV (" + std::string(kRatingsHeader) + ")")
      ->required();
  cmd->add_option("--config", args.config, "run configuration JSON")->required();
}

struct SimArgs {
  std::size_t d_max = 10;
  std::size_t problems = 100;
  std::size_t samples = 50;
  std::uint64_t seed = 42;
  double domain_lower = 0.0;
  double domain_upper = 100.0;
  std::string methods = "cloud,backward_cg,type1,iaa";
};

void add_sim_options(CLI::App* cmd, SimArgs& args) {
  cmd->add_option("--d-max", args.d_max, "largest panel size (default 10)");
  cmd->add_option("--problems", args.problems, "problems per panel size (default 100)");
  cmd->add_option("--samples", args.samples, "pool samples per panel member (default 50)");
  cmd->add_option("--seed", args.seed, "random seed (default 42)");
  cmd->add_option("--domain-lower", args.domain_lower, "rating domain lower bound (default 0)");
  cmd->add_option("--domain-upper", args.domain_upper, "rating domain upper bound (default 100)");
  cmd->add_option("--methods", args.methods,
                  "comma-separated subset of cloud,backward_cg,type1,iaa (default all)");
}

ExperimentConfig sim_config(const SimArgs& args) {
  ExperimentConfig config;
  config.d_max = args.d_max;
  config.problems = args.problems;
  config.samples = args.samples;
  config.seed = args.seed;
  config.rating_domain = {args.domain_lower, args.domain_upper};
  return config;
}

std::vector<AggregationMethod> sim_methods(const SimArgs& args) {
  std::vector<AggregationMethod> methods;
  for (const std::string& tag : split_list(args.methods)) {
    methods.push_back(parse_method_tag(tag));
  }
  return methods;
}

int run_aggregate(const SurveyArgs& survey_args, const std::string& out,
                  const std::string& plot_drops, const std::string& plot_membership) {
  const RunConfig config = load_config(survey_args.config);
  const SurveyData survey = parse_ratings(survey_args.input, config);
  const DecisionMatrix matrix = build_decision_matrix(survey);
  emit_json(clouds_to_json(survey, matrix), out);
  std::cout << "wrote " << out << '\n';

  if (!plot_drops.empty()) {
    std::ofstream file(plot_drops, std::ios::binary);
    if (!file) throw WriteError(plot_drops + ": cannot open for writing");
    file << "alternative_id,criterion_id,x,y\n";
    for (std::size_t i = 0; i < matrix.rows; ++i) {
      for (std::size_t j = 0; j < matrix.cols; ++j) {
        const std::uint64_t cell_seed = derive_stream(config.seed, {i, j});
        for (const CloudDrop& d : generate_drops(matrix.at(i, j), config.drops, cell_seed)) {
          file << survey.alternatives[i] << ',' << survey.criteria[j].id << ','
               << format_double(d.x) << ',' << format_double(d.y) << '\n';
        }
      }
    }
    file.flush();
    if (!file) throw WriteError(plot_drops + ": write failed");
    std::cout << "wrote " << plot_drops << '\n';
  }

  if (!plot_membership.empty()) {
    std::ofstream file(plot_membership, std::ios::binary);
    if (!file) throw WriteError(plot_membership + ": cannot open for writing");
    file << "alternative_id,criterion_id,segment_start,segment_end,level\n";
    std::vector<Interval> cell;
    for (std::size_t i = 0; i < survey.alternatives.size(); ++i) {
      for (std::size_t j = 0; j < survey.criteria.size(); ++j) {
        cell.clear();
        for (std::size_t k = 0; k < survey.experts.size(); ++k) {
          const auto it = survey.ratings.find({k, i, j});
          if (it != survey.ratings.end()) cell.push_back(it->second);
        }
        const StepFunction f = iaa_membership(cell);
        for (std::size_t s = 0; s + 1 < f.breakpoints.size(); ++s) {
          file << survey.alternatives[i] << ',' << survey.criteria[j].id << ','
               << format_double(f.breakpoints[s]) << ',' << format_double(f.breakpoints[s + 1])
               << ',' << format_double(f.levels[s]) << '\n';
        }
      }
    }
    file.flush();
    if (!file) throw WriteError(plot_membership + ": write failed");
    std::cout << "wrote " << plot_membership << '\n';
  }
  return 0;
}

int run_rank(const SurveyArgs& survey_args, const std::string& out) {
  const RunConfig config = load_config(survey_args.config);
  const SurveyData survey = parse_ratings(survey_args.input, config);
  PipelineOptions options;
  options.reference_policy = config.reference_policy;
  options.distance_measure = config.distance_measure;
  options.rating_scale = config.rating_scale;
  const PipelineReport report = run_pipeline(survey, options);

  nlohmann::ordered_json doc = report_to_json(survey, config, report);
  try {
    const std::vector<std::size_t> baseline = rank_iaa_baseline(survey, report.weights.weights);
    nlohmann::ordered_json section;
    section["ranks"] = baseline;
    if (baseline.size() >= 2) {
      std::vector<double> a(report.ranks.begin(), report.ranks.end());
      std::vector<double> b(baseline.begin(), baseline.end());
      section["spearman_vs_cloud_ranks"] = round6(spearman(a, b));
    }
    doc["iaa_baseline"] = std::move(section);
  } catch (const UndefinedCentroidError& e) {
    doc["iaa_baseline"] = {{"error", e.what()}};
  }
  emit_json(doc, out);
  std::cout << "wrote " << out << '\n';
  return 0;
}

int run_experiment_cmd(const SimArgs& sim_args, const std::string& records_path,
                       const std::string& summary_path) {
  const std::vector<ProblemRecord> records = run_experiment(sim_config(sim_args),
                                                            sim_methods(sim_args));
  emit_experiment_records(records, records_path);
  std::cout << "wrote " << records_path << '\n';
  const std::vector<MethodSummary> summaries = summarize(records);
  emit_experiment_summary(summaries, summary_path);
  std::cout << "wrote " << summary_path << '\n';
  return 0;
}

int run_compare_methods(const SimArgs& sim_args, const std::string& out) {
  const std::vector<AggregationMethod> methods = sim_methods(sim_args);
  const std::vector<ProblemRecord> records = run_experiment(sim_config(sim_args), methods);
  const std::vector<MethodSummary> summaries = summarize(records);

  std::printf("mean S_OR by panel size\n");
  std::printf("%4s", "d");
  for (AggregationMethod m : kAllMethods) {
    bool requested = false;
    for (const MethodSummary& s : summaries) {
      if (s.method == m) requested = true;
    }
    if (requested) std::printf("  %12s", std::string(method_tag(m)).c_str());
  }
  std::printf("\n");
  std::size_t current_d = 0;
  for (const MethodSummary& s : summaries) {
    if (s.panel_size != current_d) {
      if (current_d != 0) std::printf("\n");
      current_d = s.panel_size;
      std::printf("%4zu", s.panel_size);
    }
    std::printf("  %12.4f", s.mean_s_or);
  }
  std::printf("\n");

  if (!out.empty()) {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw WriteError(out + ": cannot open for writing");
    file << "d,method,mean_s_or,sd_s_or\n";
    for (const MethodSummary& s : summaries) {
      file << s.panel_size << ',' << method_tag(s.method) << ',' << format_double(s.mean_s_or)
           << ',' << format_double(s.sd_s_or) << '\n';
    }
    file.flush();
    if (!file) throw WriteError(out + ": write failed");
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

int run_sensitivity(const SurveyArgs& survey_args, const std::string& measures_csv,
                    const std::string& out) {
  const RunConfig config = load_config(survey_args.config);
  const SurveyData survey = parse_ratings(survey_args.input, config);

  std::vector<DistanceMeasure> measures;
  for (const std::string& tag : split_list(measures_csv)) {
    const DistanceMeasure m = parse_distance_measure(tag);
    bool seen = false;
    for (DistanceMeasure other : measures) {
      if (other == m) seen = true;
    }
    if (!seen) measures.push_back(m);
  }

  nlohmann::ordered_json doc;
  doc["alternatives"] = survey.alternatives;
  nlohmann::ordered_json names = nlohmann::ordered_json::array();
  for (DistanceMeasure m : measures) names.push_back(distance_measure_tag(m));
  doc["measures"] = std::move(names);

  std::vector<std::vector<double>> rank_vectors;
  nlohmann::ordered_json results;
  for (DistanceMeasure m : measures) {
    PipelineOptions options;
    options.reference_policy = config.reference_policy;
    options.distance_measure = m;
    options.rating_scale = config.rating_scale;
    const PipelineReport report = run_pipeline(survey, options);
    nlohmann::ordered_json entry;
    nlohmann::ordered_json rs = nlohmann::ordered_json::array();
    for (double v : report.rs) rs.push_back(round6(v));
    entry["ranking_scores"] = std::move(rs);
    entry["ranks"] = report.ranks;
    results[std::string(distance_measure_tag(m))] = std::move(entry);
    rank_vectors.emplace_back(report.ranks.begin(), report.ranks.end());
  }
  doc["results"] = std::move(results);

  if (survey.alternatives.size() >= 2) {
    nlohmann::ordered_json matrix = nlohmann::ordered_json::array();
    for (const std::vector<double>& a : rank_vectors) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (const std::vector<double>& b : rank_vectors) {
        row.push_back(round6(spearman(a, b)));
      }
      matrix.push_back(std::move(row));
    }
    doc["spearman"] = std::move(matrix);
  } else {
    doc["spearman"] = nullptr;
  }

  emit_json(doc, out);
  std::cout << "wrote " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interval survey aggregation, weighting and ranking toolkit"};
  app.require_subcommand(1);

  SurveyArgs agg_survey;
  std::string agg_out = "clouds.json";
  std::string agg_plot_drops;
  std::string agg_plot_membership;
  CLI::App* aggregate =
      app.add_subcommand("aggregate", "aggregate survey ratings into cloud models");
  add_survey_options(aggregate, agg_survey);
  aggregate->add_option("--out", agg_out, "output JSON path (default clouds.json)");
  aggregate->add_option("--plot-drops", agg_plot_drops, "also write per-cell drop CSV here");
  aggregate->add_option("--plot-membership", agg_plot_membership,
                        "also write per-cell agreement-function CSV here");

  SurveyArgs rank_survey;
  std::string rank_out = "report.json";
  CLI::App* rank_cmd = app.add_subcommand("rank", "run the full ranking pipeline");
  add_survey_options(rank_cmd, rank_survey);
  rank_cmd->add_option("--out", rank_out, "report JSON path (default report.json)");

  SimArgs experiment_args;
  std::string records_path = "records.csv";
  std::string summary_path = "summary.csv";
  CLI::App* experiment =
      app.add_subcommand("experiment", "run the aggregation quality benchmark");
  add_sim_options(experiment, experiment_args);
  experiment->add_option("--records", records_path, "per-problem CSV (default records.csv)");
  experiment->add_option("--summary", summary_path, "per-(d,method) CSV (default summary.csv)");

  SimArgs compare_args;
  std::string compare_out;
  CLI::App* compare =
      app.add_subcommand("compare-methods", "tabulate mean S_OR per method and panel size");
  add_sim_options(compare, compare_args);
  compare->add_option("--out", compare_out, "optional summary CSV path");

  SurveyArgs sens_survey;
  std::string sens_measures = "paper,euclidean,hamming";
  std::string sens_out = "sensitivity.json";
  CLI::App* sensitivity =
      app.add_subcommand("sensitivity", "re-rank under alternative distance measures");
  add_survey_options(sensitivity, sens_survey);
  sensitivity->add_option("--measures", sens_measures,
                          "comma-separated distance measures (default paper,euclidean,hamming)");
  sensitivity->add_option("--out", sens_out, "output JSON path (default sensitivity.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (aggregate->parsed()) {
      return run_aggregate(agg_survey, agg_out, agg_plot_drops, agg_plot_membership);
    }
    if (rank_cmd->parsed()) {
      return run_rank(rank_survey, rank_out);
    }
    if (experiment->parsed()) {
      return run_experiment_cmd(experiment_args, records_path, summary_path);
    }
    if (compare->parsed()) {
      return run_compare_methods(compare_args, compare_out);
    }
    if (sensitivity->parsed()) {
      return run_sensitivity(sens_survey, sens_measures, sens_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
