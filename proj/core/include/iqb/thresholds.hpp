#pragma once

#include <array>
#include <optional>
#include <vector>

#include "iqb/types.hpp"
#include "iqb/weights.hpp"

namespace iqb {

// Per (use case, metric): one threshold per quality level, in the metric's
// canonical unit. A pair may be absent entirely (metric not applicable to
// that use case), but presence at only one level is a validation error.
struct ThresholdTable {
  using LevelPair = std::array<std::optional<double>, 2>;  // [minimum, high]

  UseCaseMetricTable<LevelPair> entries{};

  std::optional<double> get(UseCase u, Metric m, QualityLevel level) const {
    return cell(entries, u, m)[static_cast<std::size_t>(level)];
  }
  void set(UseCase u, Metric m, QualityLevel level, double value) {
    cell(entries, u, m)[static_cast<std::size_t>(level)] = value;
  }
  void set_pair(UseCase u, Metric m, double minimum, double high) {
    cell(entries, u, m) = {minimum, high};
  }
  // Applicable means both levels are present.
  bool applicable(UseCase u, Metric m) const {
    const auto& pair = cell(entries, u, m);
    return pair[0].has_value() && pair[1].has_value();
  }

  friend bool operator==(const ThresholdTable&, const ThresholdTable&) = default;
};

// Empty iff every present threshold is finite and non-negative, both levels
// are present together, and the levels are ordered so that "high" is at least
// as demanding as "minimum" for the metric's direction.
std::vector<Finding> validate_threshold_table(const ThresholdTable& t);

}  // namespace iqb
