#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iqb/rfc3339.hpp"
#include "iqb/types.hpp"

namespace iqb {

// One raw measurement sample, already converted to the metric's canonical
// unit (Mbps / ms / fraction).
struct MeasurementRecord {
  std::string region_id;
  std::string dataset_id;
  Metric metric = Metric::DownloadThroughput;
  double value = 0.0;
  Instant timestamp = 0;

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

enum class StatisticKind : std::uint8_t {
  TailPercentile,     // percentile oriented so "p% of samples meet" holds
  LiteralPercentile,  // plain nearest-rank percentile at p
  Provided,           // pre-aggregated value supplied by the source
};

// Statistic token, e.g. "p95_tail", "p95", "p97.5". For Provided stats the
// token is whatever the source declared.
std::string statistic_token(StatisticKind kind, double percentile);

// Inverse of statistic_token for percentile tokens: "p95_tail" -> (95, tail),
// "p97.5" -> (97.5, literal). Nullopt for anything else ("mean", ...).
struct PercentileStatistic {
  double percentile = 95.0;
  bool tail = true;
};
std::optional<PercentileStatistic> parse_statistic_token(std::string_view token);

// One aggregated statistic per (region, dataset, metric).
struct AggregateStat {
  std::string region_id;
  std::string dataset_id;
  Metric metric = Metric::DownloadThroughput;
  StatisticKind kind = StatisticKind::TailPercentile;
  std::string statistic;  // token; source-declared for Provided stats
  double value = 0.0;
  std::uint64_t sample_count = 0;
  std::vector<Finding> warnings;  // low sample count, statistic mismatch, ...
};

}  // namespace iqb
