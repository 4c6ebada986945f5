#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cloudrank/cloud.hpp"
#include "cloudrank/rng.hpp"

using namespace cloudrank;

TEST_CASE("certainty_degree evaluates the bell curve") {
  // exp(-1/2) at one entropy unit from the center.
  CHECK(certainty_degree(1.0, 0.0, 1.0) == Catch::Approx(0.6065306597126334).epsilon(1e-14));
  CHECK(certainty_degree(0.0, 0.0, 1.0) == 1.0);
  CHECK(certainty_degree(3.0, 1.0, 2.0) == Catch::Approx(std::exp(-0.5)).epsilon(1e-14));
  // Symmetric around ex.
  CHECK(certainty_degree(2.5, 2.0, 0.3) == certainty_degree(1.5, 2.0, 0.3));
}

TEST_CASE("certainty_degree degenerates to an indicator at zero entropy") {
  CHECK(certainty_degree(5.0, 5.0, 0.0) == 1.0);
  CHECK(certainty_degree(5.0000001, 5.0, 0.0) == 0.0);
}

TEST_CASE("certainty_degree rejects bad input") {
  CHECK_THROWS_AS(certainty_degree(0.0, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(certainty_degree(std::nan(""), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("generate_drops is deterministic and certainty-consistent") {
  const NormalCloud cloud{3.5, 0.5, 0.1};
  const auto a = generate_drops(cloud, 500, 2024);
  const auto b = generate_drops(cloud, 500, 2024);
  REQUIRE(a.size() == 500);
  CHECK(a == b);
  const auto c = generate_drops(cloud, 500, 2025);
  CHECK(a != c);
  for (const auto& drop : a) {
    REQUIRE(drop.y > 0.0);
    REQUIRE(drop.y <= 1.0);
  }
}

TEST_CASE("generate_drops with zero hyper-entropy uses the fixed entropy") {
  // he = 0 makes En' = en for every drop, so y must equal the plain bell
  // curve at en.
  const NormalCloud cloud{1.0, 2.0, 0.0};
  const auto drops = generate_drops(cloud, 200, 7);
  for (const auto& drop : drops) {
    CHECK(drop.y == Catch::Approx(certainty_degree(drop.x, 1.0, 2.0)).epsilon(1e-14));
  }
}

TEST_CASE("generate_drops rejects n = 0 and invalid clouds") {
  CHECK_THROWS_AS(generate_drops({0, 1, 0.1}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_drops({0, -1, 0.1}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_drops({0, 1, -0.1}, 10, 1), std::invalid_argument);
}

TEST_CASE("backward_generate on a two-point symmetric sample") {
  // {-1, 1}: ex = 0, mean |x - ex| = 1 so en = sqrt(pi/2), population
  // variance is 1 so he = sqrt(|1 - pi/2|).
  const std::vector<double> xs{-1.0, 1.0};
  const auto c = backward_generate(xs);
  CHECK(c.ex == 0.0);
  CHECK(c.en == Catch::Approx(1.2533141373155001).epsilon(1e-14));
  CHECK(c.he == Catch::Approx(0.755510639762867).epsilon(1e-14));
}

TEST_CASE("backward_generate on a constant sample is exact") {
  const std::vector<double> xs{4.25, 4.25, 4.25};
  const auto c = backward_generate(xs);
  CHECK(c.ex == 4.25);
  CHECK(c.en == 0.0);
  CHECK(c.he == 0.0);
}

TEST_CASE("backward_generate rejects an empty sample") {
  CHECK_THROWS_AS(backward_generate(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("scale follows the (lambda, sqrt(lambda), sqrt(lambda)) rule") {
  const NormalCloud c{4.0, 4.0, 1.0};
  const auto s = scale(c, 0.25);
  CHECK(s.ex == 1.0);
  CHECK(s.en == 2.0);
  CHECK(s.he == 0.5);

  CHECK_THROWS_AS(scale(c, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale(c, -1.0), std::invalid_argument);
}

TEST_CASE("scale composes multiplicatively") {
  const NormalCloud c{3.0, 0.7, 0.2};
  const auto twice = scale(scale(c, 2.0), 8.0);
  const auto once = scale(c, 16.0);
  // ex picks up only exact power-of-two factors here.
  CHECK(twice.ex == once.ex);
  CHECK(twice.en == Catch::Approx(once.en).epsilon(1e-14));
  CHECK(twice.he == Catch::Approx(once.he).epsilon(1e-14));
}

TEST_CASE("to_interval spans three entropy units each side") {
  const auto iv = to_interval({10.0, 2.0, 0.3});
  CHECK(iv.lower == 4.0);
  CHECK(iv.upper == 16.0);
}

TEST_CASE("compare orders by ex, then smaller en, then smaller he") {
  CHECK(compare({2.0, 1.0, 1.0}, {1.0, 0.1, 0.1}) == Ordering::Greater);
  CHECK(compare({1.0, 0.1, 0.1}, {2.0, 1.0, 1.0}) == Ordering::Less);
  CHECK(compare({1.0, 0.5, 0.1}, {1.0, 0.7, 0.1}) == Ordering::Greater);
  CHECK(compare({1.0, 0.5, 0.1}, {1.0, 0.5, 0.2}) == Ordering::Greater);
  CHECK(compare({1.0, 0.5, 0.1}, {1.0, 0.5, 0.1}) == Ordering::Equal);
}

TEST_CASE("compare is antisymmetric and matches a lexicographic oracle") {
  SplitMix64 rng(31337);
  auto draw = [&]() -> NormalCloud {
    // Coarse grid so exact ties actually occur.
    const double ex = std::floor(rng.uniform(-3.0, 3.0));
    const double en = std::floor(rng.uniform(0.0, 3.0));
    const double he = std::floor(rng.uniform(0.0, 3.0));
    return {ex, en, he};
  };
  for (int trial = 0; trial < 5000; ++trial) {
    const auto a = draw();
    const auto b = draw();
    const auto ab = compare(a, b);
    const auto ba = compare(b, a);
    // Lexicographic on (ex, -en, -he).
    Ordering expected = Ordering::Equal;
    if (a.ex != b.ex) {
      expected = a.ex > b.ex ? Ordering::Greater : Ordering::Less;
    } else if (a.en != b.en) {
      expected = a.en < b.en ? Ordering::Greater : Ordering::Less;
    } else if (a.he != b.he) {
      expected = a.he < b.he ? Ordering::Greater : Ordering::Less;
    }
    REQUIRE(ab == expected);
    if (ab == Ordering::Equal) {
      REQUIRE(ba == Ordering::Equal);
    } else {
      REQUIRE(ba == (ab == Ordering::Greater ? Ordering::Less : Ordering::Greater));
    }
  }
}

TEST_CASE("distance agrees with hand-computed values") {
  const NormalCloud a{0.0, 1.0, 0.1};
  const NormalCloud b{1.0, 2.0, 0.3};
  // sqrt(1 + 1 + 0.2)
  CHECK(distance(a, b, DistanceMeasure::Mixed) ==
        Catch::Approx(1.4832396974191326).epsilon(1e-14));
  CHECK(distance(a, b, DistanceMeasure::Euclidean) ==
        Catch::Approx(std::sqrt(1.0 + 1.0 + 0.04)).epsilon(1e-14));
  CHECK(distance(a, b, DistanceMeasure::Hamming) == Catch::Approx(2.2).epsilon(1e-14));
}

TEST_CASE("distance is symmetric and zero only at identity") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 2000; ++trial) {
    const NormalCloud a{rng.uniform(-5, 5), rng.uniform(0, 3), rng.uniform(0, 1)};
    const NormalCloud b{rng.uniform(-5, 5), rng.uniform(0, 3), rng.uniform(0, 1)};
    for (auto m : {DistanceMeasure::Mixed, DistanceMeasure::Euclidean, DistanceMeasure::Hamming}) {
      REQUIRE(distance(a, b, m) == distance(b, a, m));
      REQUIRE(distance(a, a, m) == 0.0);
      REQUIRE(distance(a, b, m) > 0.0);  // continuous draws never collide
    }
  }
}

TEST_CASE("require_valid guards cloud and interval invariants") {
  CHECK_THROWS_AS(require_valid(NormalCloud{0.0, -0.1, 0.0}, "t"), std::invalid_argument);
  CHECK_THROWS_AS(require_valid(NormalCloud{0.0, 0.0, -0.1}, "t"), std::invalid_argument);
  CHECK_THROWS_AS(require_valid(NormalCloud{std::nan(""), 0.0, 0.0}, "t"), std::invalid_argument);
  CHECK_NOTHROW(require_valid(NormalCloud{-2.0, 0.0, 0.0}, "t"));
  CHECK_THROWS_AS(require_valid(Interval{2.0, 1.0}, "t"), std::invalid_argument);
  CHECK_NOTHROW(require_valid(Interval{1.0, 1.0}, "t"));
}
