#include <random>
#include <vector>

#include "doctest.h"
#include "iqb/aggregate.hpp"
#include "test_support.hpp"

using namespace iqb;

namespace {

std::vector<MeasurementRecord> loss_records(const std::string& region,
                                            const std::string& dataset, int count) {
  std::vector<MeasurementRecord> records;
  for (int i = 0; i < count; ++i) {
    // 0.00, 0.01, ..., step 0.01
    records.push_back({region, dataset, Metric::PacketLoss, i * 0.01, 1000 + i});
  }
  return records;
}

}  // namespace

TEST_SUITE_BEGIN("aggregate");

TEST_CASE("tail aggregate of 20 packet-loss samples picks the 19th smallest") {
  const auto records = loss_records("r1", "ndt", 20);
  const auto stat = aggregate_region(records, "r1", "ndt", Metric::PacketLoss, 95.0,
                                     PercentileMode::Tail);
  REQUIRE(stat.has_value());
  CHECK(stat->value == doctest::Approx(0.18).epsilon(1e-12));
  CHECK(stat->sample_count == 20);
  CHECK(stat->kind == StatisticKind::TailPercentile);
  CHECK(stat->statistic == "p95_tail");
}

TEST_CASE("singleton latency sample carries a low-sample warning") {
  const std::vector<MeasurementRecord> records = {
      {"r1", "ndt", Metric::Latency, 40.0, 0}};
  const auto stat =
      aggregate_region(records, "r1", "ndt", Metric::Latency, 95.0, PercentileMode::Tail);
  REQUIRE(stat.has_value());
  CHECK(stat->value == 40.0);
  CHECK(stat->sample_count == 1);
  REQUIRE(stat->warnings.size() == 1);
  CHECK(stat->warnings[0].code == "low_sample_count");
}

TEST_CASE("no matching records is the insufficient-data outcome") {
  const auto records = loss_records("elsewhere", "ndt", 10);
  CHECK(!aggregate_region(records, "r1", "ndt", Metric::PacketLoss, 95.0,
                          PercentileMode::Tail)
             .has_value());
}

TEST_CASE("literal mode uses the plain nearest rank") {
  // For higher_is_better, literal p95 is the near-best sample; tail p95 is
  // the 5%-from-the-bottom sample.
  std::vector<MeasurementRecord> records;
  for (int i = 1; i <= 100; ++i) {
    records.push_back({"r1", "ndt", Metric::DownloadThroughput, double(i), 0});
  }
  const auto literal = aggregate_region(records, "r1", "ndt",
                                        Metric::DownloadThroughput, 95.0,
                                        PercentileMode::Literal);
  const auto tail = aggregate_region(records, "r1", "ndt", Metric::DownloadThroughput,
                                     95.0, PercentileMode::Tail);
  REQUIRE(literal.has_value());
  REQUIRE(tail.has_value());
  CHECK(literal->value == 95.0);
  CHECK(literal->statistic == "p95");
  CHECK(tail->value == 6.0);  // floor(5)+1 = 6th smallest
  CHECK(tail->statistic == "p95_tail");
}

TEST_CASE("aggregate value is always an observed sample") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> size_dist(1, 300);
  std::uniform_real_distribution<double> value_dist(0.0, 500.0);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<MeasurementRecord> records;
    const int n = size_dist(rng);
    for (int i = 0; i < n; ++i) {
      records.push_back({"r1", "ndt", Metric::Latency, value_dist(rng), 0});
    }
    for (PercentileMode mode : {PercentileMode::Tail, PercentileMode::Literal}) {
      const auto stat =
          aggregate_region(records, "r1", "ndt", Metric::Latency, 95.0, mode);
      REQUIRE(stat.has_value());
      const bool member = std::any_of(records.begin(), records.end(),
                                      [&](const MeasurementRecord& r) {
                                        return r.value == stat->value;
                                      });
      CHECK(member);
    }
  }
}

TEST_CASE("build_aggregate_matrix cardinality and ordering") {
  std::vector<MeasurementRecord> records;
  for (const std::string region : {"r1", "r2"}) {
    for (Metric m : all_metrics()) {
      for (int i = 0; i < 3; ++i) {
        records.push_back({region, "ndt", m, 1.0 + i, 0});
      }
    }
  }
  const auto matrix = build_aggregate_matrix(records, {}, {});
  CHECK(matrix.size() == 8);  // 2 regions x 1 dataset x 4 metrics

  // Keys iterate (region, dataset, metric-token) lexicographically.
  std::vector<AggregateKey> keys;
  for (const auto& [key, stat] : matrix) keys.push_back(key);
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(keys.front().region_id == "r1");
  CHECK(to_token(keys.front().metric) == "download_throughput");
}

TEST_CASE("provided stats join computed ones under distinct keys") {
  const auto records = loss_records("r1", "ndt", 40);
  AggregateStat provided;
  provided.region_id = "r1";
  provided.dataset_id = "ookla";
  provided.metric = Metric::PacketLoss;
  provided.kind = StatisticKind::Provided;
  provided.statistic = "p95";
  provided.value = 0.01;
  provided.sample_count = 1234;

  const auto matrix =
      build_aggregate_matrix(records, std::vector<AggregateStat>{provided}, {});
  CHECK(matrix.size() == 2);
  CHECK(matrix.count({"r1", "ndt", Metric::PacketLoss}) == 1);
  CHECK(matrix.count({"r1", "ookla", Metric::PacketLoss}) == 1);
  // Declared p95 matches the configured percentile: no mismatch warning.
  CHECK(matrix.at({"r1", "ookla", Metric::PacketLoss}).warnings.empty());
}

TEST_CASE("provided statistic other than the configured percentile warns") {
  AggregateStat provided;
  provided.region_id = "r1";
  provided.dataset_id = "ookla";
  provided.metric = Metric::Latency;
  provided.kind = StatisticKind::Provided;
  provided.statistic = "mean";
  provided.value = 30.0;

  const auto matrix =
      build_aggregate_matrix({}, std::vector<AggregateStat>{provided}, {});
  const auto& stat = matrix.at({"r1", "ookla", Metric::Latency});
  REQUIRE(stat.warnings.size() == 1);
  CHECK(stat.warnings[0].code == "statistic_mismatch");
}

TEST_CASE("provided wins a collision with a computed stat, with a warning") {
  const auto records = loss_records("r1", "ookla", 40);
  AggregateStat provided;
  provided.region_id = "r1";
  provided.dataset_id = "ookla";
  provided.metric = Metric::PacketLoss;
  provided.kind = StatisticKind::Provided;
  provided.statistic = "p95";
  provided.value = 0.02;

  const auto matrix =
      build_aggregate_matrix(records, std::vector<AggregateStat>{provided}, {});
  const auto& stat = matrix.at({"r1", "ookla", Metric::PacketLoss});
  CHECK(stat.kind == StatisticKind::Provided);
  CHECK(stat.value == 0.02);
  REQUIRE(stat.warnings.size() == 1);
  CHECK(stat.warnings[0].code == "provided_overrides_computed");
}

TEST_CASE("duplicate provided stats for one key are rejected") {
  AggregateStat provided;
  provided.region_id = "r1";
  provided.dataset_id = "ookla";
  provided.metric = Metric::PacketLoss;
  provided.kind = StatisticKind::Provided;
  provided.statistic = "p95";
  provided.value = 0.02;

  const std::vector<AggregateStat> twice = {provided, provided};
  CHECK_THROWS_WITH_AS(build_aggregate_matrix({}, twice, {}),
                       doctest::Contains("duplicate provided"), std::invalid_argument);
}

TEST_CASE("per-dataset rules select the aggregation mode") {
  std::vector<MeasurementRecord> records;
  for (int i = 1; i <= 100; ++i) {
    records.push_back({"r1", "lit", Metric::DownloadThroughput, double(i), 0});
    records.push_back({"r1", "tail", Metric::DownloadThroughput, double(i), 0});
  }
  std::map<std::string, DatasetAggregation> rules;
  rules["lit"] = {Granularity::PerTest, PercentileMode::Literal, "p95"};
  rules["tail"] = {Granularity::PerTest, PercentileMode::Tail, "p95_tail"};

  const auto matrix = build_aggregate_matrix(records, {}, rules);
  CHECK(matrix.at({"r1", "lit", Metric::DownloadThroughput}).value == 95.0);
  CHECK(matrix.at({"r1", "tail", Metric::DownloadThroughput}).value == 6.0);
}

TEST_SUITE_END();
