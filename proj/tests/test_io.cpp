#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cloudrank/io.hpp"
#include "cloudrank/rng.hpp"

using namespace cloudrank;

namespace {

std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    const auto d = std::filesystem::temp_directory_path() /
                   ("cloudrank_io_tests_" + std::to_string(static_cast<long>(::getpid())));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = (scratch_dir() / name).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunConfig two_criteria_config() {
  RunConfig config;
  config.criteria = {{"quality", "Quality", Direction::Benefit},
                     {"cost", "Cost", Direction::Cost}};
  return config;
}

}  // namespace

TEST_CASE("format_double renders shortest round-trip decimals") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  SplitMix64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform(-1e6, 1e6);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("round6 keeps six significant digits") {
  CHECK(round6(0.2721655269759087) == 0.272166);
  CHECK(round6(-1.0 / 3.0) == -0.333333);
  CHECK(round6(0.5) == 0.5);
  CHECK(round6(123456789.0) == 123457000.0);
  CHECK(round6(0.0) == 0.0);
}

TEST_CASE("distance measure tags round trip") {
  CHECK(parse_distance_measure(distance_measure_tag(DistanceMeasure::Mixed)) ==
        DistanceMeasure::Mixed);
  CHECK(parse_distance_measure("euclidean") == DistanceMeasure::Euclidean);
  CHECK(parse_distance_measure("hamming") == DistanceMeasure::Hamming);
  CHECK(distance_measure_tag(DistanceMeasure::Mixed) == "paper");
  CHECK_THROWS_AS(parse_distance_measure("manhattan"), ValidationError);
}

TEST_CASE("load_config reads a full configuration") {
  const std::string path = write_file("full_config.json", R"({
    "criteria": [
      {"id": "quality", "label": "Overall quality", "direction": "benefit"},
      {"id": "cost", "direction": "cost"},
      {"id": "risk"}
    ],
    "rating_scale": {"lower": 1, "upper": 9},
    "reference_policy": "fixed",
    "reference_criterion": "cost",
    "distance_measure": "euclidean",
    "seed": 7,
    "drops": 123
  })");
  const RunConfig config = load_config(path);
  REQUIRE(config.criteria.size() == 3);
  CHECK(config.criteria[0].label == "Overall quality");
  CHECK(config.criteria[1].label == "cost");
  CHECK(config.criteria[1].direction == Direction::Cost);
  CHECK(config.criteria[2].direction == Direction::Benefit);
  CHECK(config.rating_scale == Interval{1.0, 9.0});
  CHECK(config.reference_policy.kind == ReferencePolicy::Kind::Fixed);
  CHECK(config.reference_policy.reference == 1);
  CHECK(config.distance_measure == DistanceMeasure::Euclidean);
  CHECK(config.seed == 7);
  CHECK(config.drops == 123);
}

TEST_CASE("load_config fills defaults") {
  const std::string path =
      write_file("minimal_config.json", R"({"criteria": [{"id": "a"}, {"id": "b"}]})");
  const RunConfig config = load_config(path);
  CHECK(config.rating_scale == Interval{0.0, 100.0});
  CHECK(config.reference_policy.kind == ReferencePolicy::Kind::AllPairs);
  CHECK(config.distance_measure == DistanceMeasure::Mixed);
  CHECK(config.seed == 42);
  CHECK(config.drops == 5000);
}

TEST_CASE("load_config rejects malformed files") {
  CHECK_THROWS_AS(load_config((scratch_dir() / "missing.json").string()), ParseError);
  CHECK_THROWS_AS(load_config(write_file("broken.json", "{not json")), ParseError);
  CHECK_THROWS_AS(load_config(write_file("no_criteria.json", "{}")), ValidationError);
  CHECK_THROWS_AS(load_config(write_file("empty_criteria.json", R"({"criteria": []})")),
                  ValidationError);
  CHECK_THROWS_AS(load_config(write_file("no_id.json", R"({"criteria": [{"label": "x"}]})")),
                  ValidationError);
  CHECK_THROWS_AS(
      load_config(write_file("bad_direction.json",
                             R"({"criteria": [{"id": "a", "direction": "sideways"}]})")),
      ValidationError);
  CHECK_THROWS_AS(
      load_config(write_file("dup_id.json", R"({"criteria": [{"id": "a"}, {"id": "a"}]})")),
      ValidationError);
  CHECK_THROWS_AS(
      load_config(write_file(
          "flat_scale.json",
          R"({"criteria": [{"id": "a"}], "rating_scale": {"lower": 5, "upper": 5}})")),
      ValidationError);
  CHECK_THROWS_AS(
      load_config(write_file("bad_policy.json",
                             R"({"criteria": [{"id": "a"}], "reference_policy": "ring"})")),
      ValidationError);
  CHECK_THROWS_AS(
      load_config(write_file("no_reference.json",
                             R"({"criteria": [{"id": "a"}], "reference_policy": "fixed"})")),
      ValidationError);
  CHECK_THROWS_AS(
      load_config(write_file(
          "wrong_reference.json",
          R"({"criteria": [{"id": "a"}], "reference_policy": "fixed", "reference_criterion": "z"})")),
      ValidationError);
  CHECK_THROWS_AS(
      load_config(write_file("bad_measure.json",
                             R"({"criteria": [{"id": "a"}], "distance_measure": "cosine"})")),
      ValidationError);
  CHECK_THROWS_AS(load_config(write_file("zero_drops.json",
                                         R"({"criteria": [{"id": "a"}], "drops": 0})")),
                  ValidationError);
}

TEST_CASE("parse_ratings builds a sorted survey") {
  const std::string path = write_file("ratings_ok.csv",
                                      "expert_id,alternative_id,criterion_id,lower,upper\n"
                                      "e2,laptop,quality,60,80\n"
                                      "e2,laptop,cost,30,50\n"
                                      "e1,laptop,quality,55,85\n"
                                      "e1,laptop,cost,20,45\n"
                                      "e2,tablet,quality,40,70\n"
                                      "e2,tablet,cost,10,25\n"
                                      "e1,tablet,quality,35,65\n"
                                      "e1,tablet,cost,15,30\n");
  const SurveyData survey = parse_ratings(path, two_criteria_config());
  CHECK(survey.experts == std::vector<std::string>{"e1", "e2"});
  CHECK(survey.alternatives == std::vector<std::string>{"laptop", "tablet"});
  REQUIRE(survey.criteria.size() == 2);
  CHECK(survey.ratings.size() == 8);
  CHECK(survey.ratings.at({1, 0, 0}) == Interval{60.0, 80.0});
  CHECK(survey.ratings.at({0, 1, 1}) == Interval{15.0, 30.0});
}

TEST_CASE("parse_ratings tolerates CRLF endings and blank lines") {
  const std::string path = write_file("ratings_crlf.csv",
                                      "expert_id,alternative_id,criterion_id,lower,upper\r\n"
                                      "e1,a,quality,10,20\r\n"
                                      "\r\n"
                                      "e1,a,cost,5,9\r\n");
  const SurveyData survey = parse_ratings(path, two_criteria_config());
  CHECK(survey.ratings.size() == 2);
  CHECK(survey.ratings.at({0, 0, 0}) == Interval{10.0, 20.0});
}

TEST_CASE("parse_ratings rejects structural problems with line numbers") {
  const RunConfig config = two_criteria_config();

  CHECK_THROWS_AS(parse_ratings((scratch_dir() / "absent.csv").string(), config), ParseError);
  CHECK_THROWS_AS(parse_ratings(write_file("empty.csv", ""), config), ParseError);
  CHECK_THROWS_AS(parse_ratings(write_file("bad_header.csv", "a,b,c,d,e\n"), config), ParseError);
  CHECK_THROWS_AS(
      parse_ratings(write_file("only_header.csv",
                               "expert_id,alternative_id,criterion_id,lower,upper\n"),
                    config),
      ParseError);

  try {
    parse_ratings(write_file("short_row.csv",
                             "expert_id,alternative_id,criterion_id,lower,upper\n"
                             "e1,a,quality,10,20\n"
                             "e1,a,cost,5\n"),
                  config);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }

  try {
    parse_ratings(write_file("bad_number.csv",
                             "expert_id,alternative_id,criterion_id,lower,upper\n"
                             "e1,a,quality,10,2x\n"),
                  config);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find(":2:") != std::string::npos);
    CHECK(what.find("2x") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_ratings(write_file("empty_id.csv",
                                           "expert_id,alternative_id,criterion_id,lower,upper\n"
                                           ",a,quality,10,20\n"),
                                config),
                  ParseError);
}

TEST_CASE("parse_ratings rejects bad values with context") {
  const RunConfig config = two_criteria_config();

  try {
    parse_ratings(write_file("inverted.csv",
                             "expert_id,alternative_id,criterion_id,lower,upper\n"
                             "e1,a,quality,30,20\n"),
                  config);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("inverted") != std::string::npos);
    CHECK(what.find("e1") != std::string::npos);
  }

  try {
    parse_ratings(write_file("out_of_scale.csv",
                             "expert_id,alternative_id,criterion_id,lower,upper\n"
                             "e1,a,quality,90,120\n"),
                  config);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("rating scale") != std::string::npos);
  }

  try {
    parse_ratings(write_file("unknown_criterion.csv",
                             "expert_id,alternative_id,criterion_id,lower,upper\n"
                             "e1,a,beauty,10,20\n"),
                  config);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("beauty") != std::string::npos);
  }

  try {
    parse_ratings(write_file("duplicate.csv",
                             "expert_id,alternative_id,criterion_id,lower,upper\n"
                             "e1,a,quality,10,20\n"
                             "e1,a,cost,1,2\n"
                             "e1,a,quality,11,21\n"),
                  config);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find(":4:") != std::string::npos);
    CHECK(what.find("duplicate") != std::string::npos);
  }
}

TEST_CASE("parse_ratings lists every uncovered cell") {
  try {
    parse_ratings(write_file("uncovered.csv",
                             "expert_id,alternative_id,criterion_id,lower,upper\n"
                             "e1,a,quality,10,20\n"
                             "e1,b,cost,3,8\n"),
                  two_criteria_config());
    FAIL("expected IncompleteSurveyError");
  } catch (const IncompleteSurveyError& e) {
    const std::string what = e.what();
    CHECK(what.find("(a, cost)") != std::string::npos);
    CHECK(what.find("(b, quality)") != std::string::npos);
  }
}

TEST_CASE("emit_ratings and parse_ratings round trip") {
  const std::string source = write_file("roundtrip_in.csv",
                                        "expert_id,alternative_id,criterion_id,lower,upper\n"
                                        "e1,a,quality,10.25,20.5\n"
                                        "e1,a,cost,0.1,0.30000000000000004\n"
                                        "e2,a,quality,33,44\n"
                                        "e2,a,cost,5,6\n");
  const RunConfig config = two_criteria_config();
  const SurveyData survey = parse_ratings(source, config);
  const std::string copy = (scratch_dir() / "roundtrip_out.csv").string();
  emit_ratings(survey, copy);
  const SurveyData again = parse_ratings(copy, config);
  CHECK(survey == again);
}

TEST_CASE("cloud and report JSON carry rounded values") {
  const auto j = cloud_to_json({0.2721655269759087, 1.0 / 3.0, 0.5});
  CHECK(j["ex"] == 0.272166);
  CHECK(j["en"] == 0.333333);
  CHECK(j["he"] == 0.5);
}

TEST_CASE("report JSON has the full documented shape") {
  SurveyData survey;
  survey.experts = {"e1", "e2"};
  survey.alternatives = {"a", "b"};
  survey.criteria = {{"quality", "Quality", Direction::Benefit},
                     {"cost", "Cost", Direction::Cost}};
  survey.ratings[{0, 0, 0}] = {60.0, 80.0};
  survey.ratings[{0, 0, 1}] = {30.0, 70.0};
  survey.ratings[{0, 1, 0}] = {20.0, 45.0};
  survey.ratings[{0, 1, 1}] = {10.0, 18.0};
  survey.ratings[{1, 0, 0}] = {55.0, 95.0};
  survey.ratings[{1, 0, 1}] = {42.0, 48.0};
  survey.ratings[{1, 1, 0}] = {22.0, 28.0};
  survey.ratings[{1, 1, 1}] = {5.0, 40.0};

  RunConfig config = two_criteria_config();
  PipelineOptions options;
  options.reference_policy = config.reference_policy;
  options.distance_measure = config.distance_measure;
  options.rating_scale = config.rating_scale;
  const PipelineReport report = run_pipeline(survey, options);
  const auto doc = report_to_json(survey, config, report);

  CHECK(doc["alternatives"] == std::vector<std::string>{"a", "b"});
  CHECK(doc["criteria"].size() == 2);
  CHECK(doc["criteria"][1]["direction"] == "cost");
  CHECK(doc["clouds"].size() == 2);
  CHECK(doc["clouds"][0].size() == 2);
  CHECK(doc["weights"]["values"].size() == 2);
  CHECK(doc["weights"]["policy"] == "all-pairs");
  CHECK(doc["weights"].contains("xi"));
  CHECK(doc["weights"]["zero_hyper_entropy_criteria"].empty());
  CHECK(doc["weighted_clouds"].size() == 2);
  CHECK(doc["ideals"]["positive"].size() == 2);
  CHECK(doc["ideals"]["negative"].size() == 2);
  CHECK(doc["distance_measure"] == "paper");
  CHECK(doc["distances"]["positive"].size() == 2);
  CHECK(doc["distances"]["negative"].size() == 2);
  CHECK(doc["ranking_scores"].size() == 2);
  CHECK(doc["ranks"].size() == 2);
  const std::vector<std::size_t> ranks = doc["ranks"].get<std::vector<std::size_t>>();
  CHECK(ranks == report.ranks);

  // Byte-stable serialization.
  const std::string p1 = (scratch_dir() / "report1.json").string();
  const std::string p2 = (scratch_dir() / "report2.json").string();
  emit_report(survey, config, report, p1);
  emit_report(survey, config, report, p2);
  const std::string body = slurp(p1);
  CHECK(body == slurp(p2));
  CHECK(body.back() == '\n');
}

TEST_CASE("plot emitters write one row per item") {
  const std::string drops_path = (scratch_dir() / "drops.csv").string();
  emit_plot_drops({{1.5, 0.5}, {2.0, 1.0}, {0.25, 0.125}}, drops_path);
  const std::string drops = slurp(drops_path);
  CHECK(drops == "x,y\n1.5,0.5\n2,1\n0.25,0.125\n");

  const std::string memb_path = (scratch_dir() / "membership.csv").string();
  emit_plot_membership(iaa_membership(std::vector<Interval>{{1.0, 3.0}, {2.0, 4.0}}), memb_path);
  const std::string memb = slurp(memb_path);
  CHECK(memb ==
        "segment_start,segment_end,level\n"
        "1,2,0.5\n"
        "2,3,1\n"
        "3,4,0.5\n");
}

TEST_CASE("experiment CSV emitters match the documented layout") {
  ExperimentConfig config;
  config.d_max = 3;
  config.problems = 2;
  config.samples = 5;
  config.seed = 21;
  const auto records = run_experiment(config, {AggregationMethod::Cloud, AggregationMethod::Iaa});
  const auto summaries = summarize(records);

  const std::string rec_path = (scratch_dir() / "records.csv").string();
  emit_experiment_records(records, rec_path);
  std::istringstream rec_lines(slurp(rec_path));
  std::string line;
  std::getline(rec_lines, line);
  CHECK(line == "d,p,method,pool_mean,pool_q1,pool_q2,pool_q3,m_mean,m_q1,m_q2,m_q3,s_or");
  std::size_t rows = 0;
  while (std::getline(rec_lines, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == records.size() * 2);

  const std::string sum_path = (scratch_dir() / "summary.csv").string();
  emit_experiment_summary(summaries, sum_path);
  std::istringstream sum_lines(slurp(sum_path));
  std::getline(sum_lines, line);
  CHECK(line.rfind("# ", 0) == 0);
  std::getline(sum_lines, line);
  CHECK(line == "d,method,mean_s_or,sd_s_or,t_mean,p_mean,t_q1,p_q1,t_q2,p_q2,t_q3,p_q3");
  rows = 0;
  while (std::getline(sum_lines, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == summaries.size());
}

TEST_CASE("writers surface filesystem failures") {
  CHECK_THROWS_AS(emit_plot_drops({{1.0, 1.0}}, "/nonexistent_dir_cloudrank/x.csv"), WriteError);
  SurveyData survey;
  survey.experts = {"e"};
  survey.alternatives = {"a"};
  survey.criteria = {{"c", "c", Direction::Benefit}};
  survey.ratings[{0, 0, 0}] = {1.0, 2.0};
  CHECK_THROWS_AS(emit_ratings(survey, "/nonexistent_dir_cloudrank/y.csv"), WriteError);
}
