// Aggregates one panel of interval ratings into a cloud model and samples a
// few drops from it.

#include <cstdio>
#include <vector>

#include "cloudrank/aggregate.hpp"
#include "cloudrank/cloud.hpp"

int main() {
  using namespace cloudrank;

  const std::vector<Interval> panel = {{3.0, 4.0}, {1.0, 6.0}, {2.0, 5.0}};
  const NormalCloud cloud = aggregate_clouds(panel);
  std::printf("panel of %zu interval ratings\n", panel.size());
  for (const Interval& iv : panel) {
    const GaussianRating g = interval_to_gaussian(iv);
    std::printf("  [%.1f, %.1f]  ->  mean %.3f, sigma %.3f\n", iv.lower, iv.upper, g.mean,
                g.sigma);
  }
  std::printf("aggregated cloud: ex %.4f, en %.4f, he %.4f\n", cloud.ex, cloud.en, cloud.he);

  std::printf("\nten drops (position, certainty):\n");
  for (const CloudDrop& drop : generate_drops(cloud, 10, 2024)) {
    std::printf("  %8.4f  %.4f\n", drop.x, drop.y);
  }

  const StepFunction agreement = iaa_membership(panel);
  std::printf("\nagreement function segments:\n");
  for (std::size_t i = 0; i + 1 < agreement.breakpoints.size(); ++i) {
    std::printf("  [%.1f, %.1f)  level %.3f\n", agreement.breakpoints[i],
                agreement.breakpoints[i + 1], agreement.levels[i]);
  }
  return 0;
}
