#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iqb/aggregate.hpp"
#include "iqb/measurement.hpp"
#include "iqb/thresholds.hpp"
#include "iqb/types.hpp"
#include "iqb/weights.hpp"

namespace iqb {

// A synthetic-measurement scenario: for every (use case, metric) with
// thresholds, whether the generated data should pass or fail at `level`.
// The outcome applies uniformly to every dataset in the plan; one sample set
// per (region, dataset, metric) must satisfy all six use cases at once, so
// the generator solves the intersection of their threshold bands.
struct FixtureSpec {
  std::string region = "region-1";
  std::vector<std::string> datasets;
  std::uint64_t samples_per_cell = 50;
  QualityLevel level = QualityLevel::High;
  UseCaseMetricTable<bool> pass{};

  static FixtureSpec all_pass(std::string region, std::vector<std::string> datasets,
                              std::uint64_t samples_per_cell);
  void set_outcome(UseCase u, Metric m, bool should_pass) {
    cell(pass, u, m) = should_pass;
  }
};

// Deterministic for a given seed. The generated samples provably realize the
// declared outcomes under the tail-percentile rule: per cell, the tail-rank
// element equals a solved target value, and the generator re-runs aggregation
// and binary scoring to verify before returning. Throws std::invalid_argument
// when the scenario is impossible (conflicting threshold bands, zero sample
// count, or a band outside the metric's value domain).
std::vector<MeasurementRecord> generate_fixture(std::uint64_t seed,
                                                const FixtureSpec& spec,
                                                const ThresholdTable& thresholds,
                                                const AggregationOptions& options = {});

}  // namespace iqb
