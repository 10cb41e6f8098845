#include "iqb/thresholds.hpp"

#include <cmath>
#include <string>

namespace iqb {
namespace {

std::string threshold_key(UseCase u, Metric m) {
  return std::string("thresholds.") + std::string(to_token(u)) + "." +
         std::string(to_token(m));
}

}  // namespace

std::vector<Finding> validate_threshold_table(const ThresholdTable& t) {
  std::vector<Finding> findings;
  for (UseCase u : all_use_cases()) {
    for (Metric m : all_metrics()) {
      const auto& pair = cell(t.entries, u, m);
      const auto& minimum = pair[static_cast<std::size_t>(QualityLevel::Minimum)];
      const auto& high = pair[static_cast<std::size_t>(QualityLevel::High)];
      if (!minimum && !high) continue;

      if (minimum.has_value() != high.has_value()) {
        findings.push_back({Finding::Severity::Error, "threshold_level_asymmetry",
                            threshold_key(u, m),
                            "level asymmetry: present at one quality level, absent at "
                            "the other"});
        continue;
      }
      bool values_ok = true;
      for (QualityLevel level : {QualityLevel::Minimum, QualityLevel::High}) {
        const double v = *pair[static_cast<std::size_t>(level)];
        if (!std::isfinite(v) || v < 0.0) {
          findings.push_back(
              {Finding::Severity::Error, "threshold_value_invalid",
               threshold_key(u, m) + "." + std::string(to_token(level)),
               "threshold must be finite and non-negative"});
          values_ok = false;
        }
      }
      if (!values_ok) continue;

      if (metric_direction(m) == Direction::HigherIsBetter) {
        if (*high < *minimum) {
          findings.push_back({Finding::Severity::Error, "threshold_order",
                              threshold_key(u, m),
                              "high < minimum for higher_is_better metric"});
        }
      } else {
        if (*high > *minimum) {
          findings.push_back({Finding::Severity::Error, "threshold_order",
                              threshold_key(u, m),
                              "high > minimum for lower_is_better metric"});
        }
      }
    }
  }
  return findings;
}

}  // namespace iqb
