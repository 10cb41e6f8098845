#include "iqb/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace iqb {
namespace {

std::string stat_key(const std::string& region, const std::string& dataset, Metric m) {
  return region + "." + dataset + "." + std::string(to_token(m));
}

// Tokens that count as "the configured percentile" when checking provided
// statistics; anything else (mean, median, ...) is a mismatch.
bool matches_expected_statistic(const std::string& token, double p) {
  return token == statistic_token(StatisticKind::LiteralPercentile, p) ||
         token == statistic_token(StatisticKind::TailPercentile, p);
}

}  // namespace

std::optional<AggregateStat> aggregate_region(std::span<const MeasurementRecord> records,
                                              const std::string& region_id,
                                              const std::string& dataset_id,
                                              Metric metric, double p,
                                              PercentileMode mode,
                                              const AggregationOptions& options) {
  std::vector<double> values;
  for (const auto& r : records) {
    if (r.region_id == region_id && r.dataset_id == dataset_id && r.metric == metric) {
      if (!std::isfinite(r.value)) {
        throw std::invalid_argument("aggregate_region: non-finite value for " +
                                    stat_key(region_id, dataset_id, metric));
      }
      values.push_back(r.value);
    }
  }
  if (values.empty()) return std::nullopt;

  AggregateStat stat;
  stat.region_id = region_id;
  stat.dataset_id = dataset_id;
  stat.metric = metric;
  stat.sample_count = values.size();

  if (mode == PercentileMode::Tail) {
    const std::size_t rank = tail_rank(values.size(), p, metric_direction(metric));
    std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
    stat.value = values[rank - 1];
    stat.kind = StatisticKind::TailPercentile;
  } else {
    stat.value = nearest_rank_percentile(values, p);
    stat.kind = StatisticKind::LiteralPercentile;
  }
  stat.statistic = statistic_token(stat.kind, p);

  if (stat.sample_count < options.min_samples) {
    stat.warnings.push_back(
        {Finding::Severity::Warning, "low_sample_count",
         stat_key(region_id, dataset_id, metric),
         "only " + std::to_string(stat.sample_count) + " samples (minimum " +
             std::to_string(options.min_samples) + ")"});
  }
  return stat;
}

AggregateMatrix build_aggregate_matrix(
    std::span<const MeasurementRecord> records, std::span<const AggregateStat> provided,
    const std::map<std::string, DatasetAggregation>& dataset_rules,
    const AggregationOptions& options) {
  AggregateMatrix matrix;

  // Distinct keys present in the raw records.
  std::vector<AggregateKey> keys;
  for (const auto& r : records) {
    keys.push_back({r.region_id, r.dataset_id, r.metric});
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  for (const auto& key : keys) {
    PercentileMode mode = PercentileMode::Tail;
    if (const auto it = dataset_rules.find(key.dataset_id); it != dataset_rules.end()) {
      mode = it->second.mode;
    }
    auto stat = aggregate_region(records, key.region_id, key.dataset_id, key.metric,
                                 options.percentile, mode, options);
    if (stat) matrix.emplace(key, std::move(*stat));
  }

  for (const auto& p : provided) {
    AggregateKey key{p.region_id, p.dataset_id, p.metric};
    AggregateStat stat = p;
    if (!matches_expected_statistic(stat.statistic, options.percentile)) {
      stat.warnings.push_back(
          {Finding::Severity::Warning, "statistic_mismatch",
           stat_key(p.region_id, p.dataset_id, p.metric),
           "provided statistic '" + stat.statistic + "' is not the configured '" +
               statistic_token(StatisticKind::LiteralPercentile, options.percentile) +
               "'"});
    }
    const auto [it, inserted] = matrix.emplace(key, stat);
    if (!inserted) {
      if (it->second.kind == StatisticKind::Provided) {
        throw std::invalid_argument("duplicate provided statistic for " +
                                    stat_key(p.region_id, p.dataset_id, p.metric));
      }
      // Computed value collides with a provided one: the provided stat wins.
      stat.warnings.push_back({Finding::Severity::Warning, "provided_overrides_computed",
                               stat_key(p.region_id, p.dataset_id, p.metric),
                               "provided statistic overrides a value computed from " +
                                   std::to_string(it->second.sample_count) +
                                   " per-test records"});
      it->second = std::move(stat);
    }
  }
  return matrix;
}

}  // namespace iqb
