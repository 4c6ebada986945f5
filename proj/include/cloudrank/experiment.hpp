#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cloudrank/aggregate.hpp"
#include "cloudrank/cloud.hpp"
#include "cloudrank/rng.hpp"
#include "cloudrank/stats.hpp"

namespace cloudrank {

enum class AggregationMethod { Cloud, BackwardCg, Type1, Iaa };

constexpr AggregationMethod kAllMethods[] = {AggregationMethod::Cloud,
                                             AggregationMethod::BackwardCg,
                                             AggregationMethod::Type1, AggregationMethod::Iaa};

inline std::string_view method_tag(AggregationMethod m) {
  switch (m) {
    case AggregationMethod::Cloud: return "cloud";
    case AggregationMethod::BackwardCg: return "backward_cg";
    case AggregationMethod::Type1: return "type1";
    case AggregationMethod::Iaa: return "iaa";
  }
  throw std::invalid_argument("method_tag: unknown method");
}

inline AggregationMethod parse_method_tag(std::string_view tag) {
  for (AggregationMethod m : kAllMethods) {
    if (method_tag(m) == tag) return m;
  }
  throw std::invalid_argument("parse_method_tag: unknown method '" + std::string(tag) + "'");
}

// Simulation plan: for each panel size d in 2..=d_max, run `problems`
// independent aggregation problems, each pooling `samples` draws per panel
// member. Every random quantity is drawn from a substream derived from
// (seed, d, p, role), so results do not depend on evaluation order.
struct ExperimentConfig {
  std::size_t d_max = 10;
  std::size_t problems = 100;
  std::size_t samples = 50;
  std::uint64_t seed = 42;
  Interval rating_domain{0.0, 100.0};
};

struct MethodOutcome {
  SummaryStats stats;
  double s_or = 0.0;
};

struct ProblemRecord {
  std::size_t panel_size = 0;
  std::size_t problem_index = 0;
  SummaryStats pool_stats;
  std::vector<std::pair<AggregationMethod, MethodOutcome>> outcomes;
};

struct MethodSummary {
  std::size_t panel_size = 0;
  AggregationMethod method = AggregationMethod::Cloud;
  double mean_s_or = 0.0;
  double sd_s_or = 0.0;
  TTestResult t_mean;
  TTestResult t_q1;
  TTestResult t_q2;
  TTestResult t_q3;
};

inline NormalCloud backward_cg_aggregate(std::span<const double> pool) {
  return backward_generate(pool);
}

// Overlap of two inter-quartile ranges. Eq-width collapse is resolved by
// continuity of the min form: identical points agree fully, anything else
// involving a degenerate range counts as no overlap.
inline double iqr_overlap(const Interval& a, const Interval& b) {
  require_valid(a, "iqr_overlap");
  require_valid(b, "iqr_overlap");
  if (a.width() <= 0.0 || b.width() <= 0.0) {
    return (a.width() == 0.0 && b.width() == 0.0 && a.lower == b.lower) ? 1.0 : 0.0;
  }
  return overlap_similarity(a, b);
}

// Draws n values from the density proportional to a step function's level.
inline std::vector<double> sample_step_density(const StepFunction& f, std::size_t n,
                                               std::uint64_t seed) {
  if (n == 0) {
    throw std::invalid_argument("sample_step_density: sample count must be at least 1");
  }
  std::vector<double> cumulative;
  cumulative.reserve(f.breakpoints.size());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < f.breakpoints.size(); ++i) {
    area += f.levels[i] * (f.breakpoints[i + 1] - f.breakpoints[i]);
    cumulative.push_back(area);
  }
  if (cumulative.empty() || area <= 0.0) {
    throw std::invalid_argument("sample_step_density: function has zero area");
  }
  SplitMix64 rng(seed);
  std::vector<double> xs;
  xs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform01() * area;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
    const double before = idx == 0 ? 0.0 : cumulative[idx - 1];
    xs.push_back(f.breakpoints[idx] + (u - before) / f.levels[idx]);
  }
  return xs;
}

namespace detail {

// Substream roles: 0 draws the panel intervals, 1 draws the pool, 2 + method
// index draws that method's comparison sample.
inline std::uint64_t substream(std::uint64_t seed, std::size_t d, std::size_t p,
                               std::uint64_t role) {
  return derive_stream(seed, {static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(p), role});
}

inline std::vector<Interval> draw_panel(const Interval& domain, std::size_t d,
                                        std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Interval> panel;
  panel.reserve(d);
  for (std::size_t q = 0; q < d; ++q) {
    double lo;
    double hi;
    do {
      lo = rng.uniform(domain.lower, domain.upper);
      hi = rng.uniform(domain.lower, domain.upper);
      if (lo > hi) std::swap(lo, hi);
    } while (lo == hi);
    panel.push_back({lo, hi});
  }
  return panel;
}

}  // namespace detail

inline void require_valid(const ExperimentConfig& config) {
  if (config.d_max < 2) {
    throw std::invalid_argument("run_experiment: d_max must be at least 2");
  }
  if (config.problems < 1) {
    throw std::invalid_argument("run_experiment: problems must be at least 1");
  }
  if (config.samples < 1) {
    throw std::invalid_argument("run_experiment: samples must be at least 1");
  }
  require_valid(config.rating_domain, "run_experiment");
  if (config.rating_domain.width() <= 0.0) {
    throw std::invalid_argument("run_experiment: rating domain must have positive width");
  }
}

// Runs the aggregation benchmark. Each problem draws a panel of random
// intervals, pools `samples` Normal draws per member as ground truth, then
// lets each requested method aggregate the panel and produce a comparison
// sample: `samples * d` values for cloud, type1 and iaa, `samples` values
// for the backward generator (it is fitted on the pool itself, so a
// pool-sized resample would just shadow the pool quartiles). Each sample is
// summarized and scored by the overlap of its inter-quartile range with the
// pool's.
inline std::vector<ProblemRecord> run_experiment(const ExperimentConfig& config,
                                                 std::vector<AggregationMethod> methods) {
  require_valid(config);
  if (methods.empty()) {
    throw std::invalid_argument("run_experiment: no methods requested");
  }
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  std::vector<ProblemRecord> records;
  records.reserve((config.d_max - 1) * config.problems);
  for (std::size_t d = 2; d <= config.d_max; ++d) {
    for (std::size_t p = 0; p < config.problems; ++p) {
      const std::vector<Interval> panel =
          detail::draw_panel(config.rating_domain, d, detail::substream(config.seed, d, p, 0));

      SplitMix64 pool_rng(detail::substream(config.seed, d, p, 1));
      std::vector<double> pool;
      pool.reserve(config.samples * d);
      for (const Interval& iv : panel) {
        const GaussianRating g = interval_to_gaussian(iv);
        for (std::size_t r = 0; r < config.samples; ++r) {
          pool.push_back(pool_rng.normal(g.mean, g.sigma));
        }
      }

      ProblemRecord record;
      record.panel_size = d;
      record.problem_index = p;
      record.pool_stats = summarize_sample(pool);
      const Interval pool_iqr{record.pool_stats.q1, record.pool_stats.q3};

      for (AggregationMethod m : methods) {
        const std::uint64_t stream =
            detail::substream(config.seed, d, p, 2 + static_cast<std::uint64_t>(m));
        const std::size_t n = config.samples * d;
        std::vector<double> xs;
        switch (m) {
          case AggregationMethod::Cloud: {
            const NormalCloud cloud = aggregate_clouds(panel);
            xs.reserve(n);
            for (const CloudDrop& drop : generate_drops(cloud, n, stream)) {
              xs.push_back(drop.x);
            }
            break;
          }
          case AggregationMethod::BackwardCg: {
            const NormalCloud cloud = backward_cg_aggregate(pool);
            xs.reserve(config.samples);
            for (const CloudDrop& drop : generate_drops(cloud, config.samples, stream)) {
              xs.push_back(drop.x);
            }
            break;
          }
          case AggregationMethod::Type1: {
            const GaussianRating g = aggregate_type1(panel);
            SplitMix64 rng(stream);
            xs.reserve(n);
            for (std::size_t k = 0; k < n; ++k) {
              xs.push_back(rng.normal(g.mean, g.sigma));
            }
            break;
          }
          case AggregationMethod::Iaa: {
            xs = sample_step_density(iaa_membership(panel), n, stream);
            break;
          }
        }
        MethodOutcome outcome;
        outcome.stats = summarize_sample(xs);
        outcome.s_or = iqr_overlap(pool_iqr, {outcome.stats.q1, outcome.stats.q3});
        record.outcomes.emplace_back(m, outcome);
      }
      records.push_back(std::move(record));
    }
  }
  return records;
}

// Groups records by (panel size, method) and reports the S_OR distribution
// plus paired t tests between the pool statistics and the method statistics
// across problems.
inline std::vector<MethodSummary> summarize(const std::vector<ProblemRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("summarize: no records");
  }
  std::vector<std::size_t> panel_sizes;
  for (const ProblemRecord& r : records) panel_sizes.push_back(r.panel_size);
  std::sort(panel_sizes.begin(), panel_sizes.end());
  panel_sizes.erase(std::unique(panel_sizes.begin(), panel_sizes.end()), panel_sizes.end());

  std::vector<MethodSummary> summaries;
  for (std::size_t d : panel_sizes) {
    for (AggregationMethod m : kAllMethods) {
      std::vector<double> s_or;
      std::vector<double> pool_mean, pool_q1, pool_q2, pool_q3;
      std::vector<double> meth_mean, meth_q1, meth_q2, meth_q3;
      for (const ProblemRecord& r : records) {
        if (r.panel_size != d) continue;
        for (const auto& [method, outcome] : r.outcomes) {
          if (method != m) continue;
          s_or.push_back(outcome.s_or);
          pool_mean.push_back(r.pool_stats.mean);
          pool_q1.push_back(r.pool_stats.q1);
          pool_q2.push_back(r.pool_stats.q2);
          pool_q3.push_back(r.pool_stats.q3);
          meth_mean.push_back(outcome.stats.mean);
          meth_q1.push_back(outcome.stats.q1);
          meth_q2.push_back(outcome.stats.q2);
          meth_q3.push_back(outcome.stats.q3);
        }
      }
      if (s_or.empty()) continue;
      MethodSummary s;
      s.panel_size = d;
      s.method = m;
      s.mean_s_or = mean(s_or);
      double ss = 0.0;
      for (double v : s_or) ss += (v - s.mean_s_or) * (v - s.mean_s_or);
      s.sd_s_or = s_or.size() > 1 ? std::sqrt(ss / static_cast<double>(s_or.size() - 1)) : 0.0;
      s.t_mean = paired_t_test(pool_mean, meth_mean);
      s.t_q1 = paired_t_test(pool_q1, meth_q1);
      s.t_q2 = paired_t_test(pool_q2, meth_q2);
      s.t_q3 = paired_t_test(pool_q3, meth_q3);
      summaries.push_back(std::move(s));
    }
  }
  return summaries;
}

}  // namespace cloudrank
