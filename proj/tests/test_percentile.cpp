#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "iqb/percentile.hpp"
#include "test_support.hpp"

using namespace iqb;

TEST_SUITE_BEGIN("percentile");

TEST_CASE("nearest-rank examples") {
  CHECK(nearest_rank_percentile(std::vector<double>{7.0}, 95.0) == 7.0);

  std::vector<double> ascending(20);
  std::iota(ascending.begin(), ascending.end(), 1.0);  // 1..20
  // ceil(0.95 * 20) = 19 -> 19th smallest
  CHECK(nearest_rank_percentile(ascending, 95.0) == 19.0);

  // ceil(0.5 * 5) = 3 -> 3rd smallest
  CHECK(nearest_rank_percentile(std::vector<double>{5, 1, 3, 2, 4}, 50.0) == 3.0);
}

TEST_CASE("rank arithmetic stays exact at integer products") {
  // 0.55 * 20 = 11.000000000000002 in doubles; the rank must still be 11.
  CHECK(nearest_rank(20, 55.0) == 11);
  // Exhaustive check against integer ceil for whole percentiles.
  for (std::size_t n = 1; n <= 200; ++n) {
    for (int p = 1; p <= 100; ++p) {
      const std::size_t expected = (static_cast<std::size_t>(p) * n + 99) / 100;
      CAPTURE(n);
      CAPTURE(p);
      CHECK(nearest_rank(n, static_cast<double>(p)) == expected);
    }
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_WITH_AS(nearest_rank_percentile(std::vector<double>{}, 95.0),
                       doctest::Contains("no samples"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      nearest_rank_percentile(std::vector<double>{1.0, NAN, 2.0}, 95.0),
      doctest::Contains("index 1"), std::invalid_argument);
  CHECK_THROWS_AS(nearest_rank_percentile(std::vector<double>{1.0}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(nearest_rank_percentile(std::vector<double>{1.0}, 101.0),
                  std::invalid_argument);
}

TEST_CASE("matches the sort-and-index oracle on random lists") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> size_dist(1, 2000);
  std::uniform_real_distribution<double> value_dist(-1e6, 1e6);
  std::uniform_real_distribution<double> p_dist(0.5, 100.0);

  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = size_dist(rng);
    std::vector<double> values(n);
    for (auto& v : values) v = value_dist(rng);
    const double p = p_dist(rng);

    const double actual = nearest_rank_percentile(values, p);
    CHECK(actual == test::sorted_rank_oracle(values, p));
    // Membership: the result is an observed sample.
    CHECK(std::find(values.begin(), values.end(), actual) != values.end());
  }
}

TEST_CASE("permutation invariance") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> value_dist(0.0, 100.0);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<double> values(200);
    for (auto& v : values) v = value_dist(rng);
    const double expected = nearest_rank_percentile(values, 95.0);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      std::shuffle(values.begin(), values.end(), rng);
      CHECK(nearest_rank_percentile(values, 95.0) == expected);
    }
  }
}

TEST_CASE("monotonicity in p") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> value_dist(0.0, 100.0);
  std::vector<double> values(137);
  for (auto& v : values) v = value_dist(rng);
  double last = nearest_rank_percentile(values, 1.0);
  for (int p = 2; p <= 100; ++p) {
    const double current = nearest_rank_percentile(values, static_cast<double>(p));
    CHECK(current >= last);
    last = current;
  }
}

TEST_CASE("tail_percentile_for orients by direction") {
  CHECK(tail_percentile_for(Metric::PacketLoss, 95.0) == 95.0);
  CHECK(tail_percentile_for(Metric::Latency, 95.0) == 95.0);
  CHECK(tail_percentile_for(Metric::DownloadThroughput, 95.0) == 5.0);
  CHECK(tail_percentile_for(Metric::UploadThroughput, 95.0) == 5.0);
  CHECK_THROWS_AS(tail_percentile_for(Metric::Latency, 100.0), std::invalid_argument);
}

TEST_CASE("tail_rank at integer boundaries") {
  // n=20, p=95: lower tail keeps ceil(19)=19; upper tail needs floor(1)+1=2,
  // not ceil(1)=1, for the >=95% equivalence to hold.
  CHECK(tail_rank(20, 95.0, Direction::LowerIsBetter) == 19);
  CHECK(tail_rank(20, 95.0, Direction::HigherIsBetter) == 2);
  // Non-integer products agree with the plain nearest rank at 100-p.
  CHECK(tail_rank(21, 95.0, Direction::HigherIsBetter) == nearest_rank(21, 5.0));
  CHECK(tail_rank(33, 95.0, Direction::LowerIsBetter) == nearest_rank(33, 95.0));
}

TEST_CASE("tail semantics equal brute-force counting, both directions") {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<std::size_t> size_dist(1, 400);
  std::uniform_real_distribution<double> value_dist(0.0, 100.0);
  std::uniform_real_distribution<double> threshold_dist(0.0, 100.0);

  for (Direction direction : {Direction::LowerIsBetter, Direction::HigherIsBetter}) {
    for (int iter = 0; iter < 300; ++iter) {
      const std::size_t n = size_dist(rng);
      std::vector<double> values(n);
      for (auto& v : values) v = value_dist(rng);
      const double threshold = threshold_dist(rng);

      std::vector<double> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      const double aggregate = sorted[tail_rank(n, 95.0, direction) - 1];
      const bool meets = direction == Direction::HigherIsBetter
                             ? aggregate >= threshold
                             : aggregate <= threshold;
      CAPTURE(n);
      CAPTURE(threshold);
      CHECK(meets == test::brute_force_meets(values, threshold, direction, 95.0));
    }
  }
}

TEST_SUITE_END();
