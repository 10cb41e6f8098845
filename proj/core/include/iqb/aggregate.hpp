#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "iqb/measurement.hpp"
#include "iqb/percentile.hpp"
#include "iqb/types.hpp"

namespace iqb {

enum class PercentileMode : std::uint8_t { Tail, Literal };

struct AggregationOptions {
  double percentile = 95.0;
  // Below this sample count a stat still scores but carries a warning.
  std::uint64_t min_samples = 30;
};

// Map key ordered (region, dataset, metric token) lexicographically; this is
// also the deterministic output order of the aggregate command.
struct AggregateKey {
  std::string region_id;
  std::string dataset_id;
  Metric metric = Metric::DownloadThroughput;

  friend bool operator==(const AggregateKey&, const AggregateKey&) = default;
  friend bool operator<(const AggregateKey& a, const AggregateKey& b) {
    return std::tie(a.region_id, a.dataset_id) < std::tie(b.region_id, b.dataset_id) ||
           (std::tie(a.region_id, a.dataset_id) == std::tie(b.region_id, b.dataset_id) &&
            to_token(a.metric) < to_token(b.metric));
  }
};

using AggregateMatrix = std::map<AggregateKey, AggregateStat>;

// Which aggregation rule each dataset uses; resolved from configuration.
struct DatasetAggregation {
  Granularity granularity = Granularity::PerTest;
  PercentileMode mode = PercentileMode::Tail;
  std::string declared_statistic;  // for pre-aggregated sources
};

// Filters `records` to (region, dataset, metric) and computes the percentile
// statistic. Tail mode orients the rank so "at least p% of samples meet the
// threshold" is equivalent to comparing the aggregate against it; literal
// mode is the plain nearest-rank percentile at p. Returns nullopt when no
// records match (insufficient data — distinct from a score of 0).
std::optional<AggregateStat> aggregate_region(std::span<const MeasurementRecord> records,
                                              const std::string& region_id,
                                              const std::string& dataset_id,
                                              Metric metric, double p,
                                              PercentileMode mode,
                                              const AggregationOptions& options = {});

// Aggregates every (region, dataset, metric) present in `records` and merges
// pass-through `provided` stats. On a key collision the provided stat wins and
// a warning is recorded on it. Duplicate provided stats for one key throw
// std::invalid_argument. `dataset_rules` selects tail/literal per dataset and
// supplies the declared statistic for mismatch warnings; datasets without a
// rule aggregate in tail mode.
AggregateMatrix build_aggregate_matrix(
    std::span<const MeasurementRecord> records, std::span<const AggregateStat> provided,
    const std::map<std::string, DatasetAggregation>& dataset_rules,
    const AggregationOptions& options = {});

}  // namespace iqb
