#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "iqb/aggregate.hpp"
#include "iqb/thresholds.hpp"
#include "iqb/types.hpp"
#include "iqb/weights.hpp"

namespace iqb {

// Structural problems in a config document (malformed JSON, unknown keys,
// missing sections, unknown tokens). These map to the usage/parse exit code;
// semantic problems (weight ranges, threshold ordering) are Findings instead.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatasetSpec {
  std::string id;
  Granularity granularity = Granularity::PerTest;
  // "p95_tail" or "p95" select tail/literal aggregation for per-test
  // datasets; pre-aggregated datasets declare whatever statistic the source
  // publishes ("p95", "mean", ...).
  std::string statistic = "p95_tail";

  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

struct Config {
  WeightTable weights;
  ThresholdTable thresholds;
  std::vector<DatasetSpec> datasets;

  const DatasetSpec* find_dataset(const std::string& id) const;
  std::map<std::string, DatasetAggregation> dataset_rules() const;
  // Percentile shared by every "p<N>"/"p<N>_tail" statistic in `datasets`;
  // 95 when none specify one.
  double percentile() const;

  friend bool operator==(const Config&, const Config&) = default;
};

// One JSON document with three sections:
//   "weights"    (optional) three tiers: use_cases, requirements, datasets;
//                an omitted tier takes defaults, a present tier is sparse
//                and unlisted keys mean weight 0
//   "thresholds" (required) rows of use_case, metric, minimum, high, unit
//   "datasets"   (required) rows of id, granularity, statistic
// Unknown keys anywhere are rejected.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

// Canonical serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const Config& config);

// Runs both table validators plus dataset-spec checks (id syntax, statistic
// tokens, weight references to undeclared datasets).
std::vector<Finding> validate_config(const Config& config);

}  // namespace iqb
