#include "iqb/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "iqb/scoring.hpp"

namespace iqb {
namespace {

// 2025-01-01T00:00:00Z, in microseconds.
constexpr Instant kFixtureEpoch = 1'735'689'600LL * 1'000'000LL;

struct Band {
  double lo = 0.0;  // inclusive
  double hi = 0.0;  // inclusive
};

// Solves the aggregate target band for one metric from the pass/fail flags of
// every applicable use case.
Band solve_band(Metric metric, const FixtureSpec& spec, const ThresholdTable& thresholds) {
  const Direction direction = metric_direction(metric);
  const double value_max =
      metric == Metric::PacketLoss ? 1.0 : std::numeric_limits<double>::infinity();

  // Start from the metric's full domain.
  double lo = 0.0;
  double hi = value_max;
  bool any = false;

  for (UseCase u : all_use_cases()) {
    const auto threshold = thresholds.get(u, metric, spec.level);
    if (!threshold) continue;
    any = true;
    const bool want_pass = cell(spec.pass, u, metric);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    if (direction == Direction::LowerIsBetter) {
      if (want_pass) {
        hi = std::min(hi, *threshold);  // value <= T
      } else {
        lo = std::max(lo, std::nextafter(*threshold, kInf));  // value > T
      }
    } else {
      if (want_pass) {
        lo = std::max(lo, *threshold);  // value >= T
      } else {
        hi = std::min(hi, std::nextafter(*threshold, -kInf));  // value < T
      }
    }
  }
  if (!any) return {NAN, NAN};  // metric unused by every use case
  if (lo > hi) {
    throw std::invalid_argument("fixture: scenario impossible for metric " +
                                std::string(to_token(metric)) +
                                ": conflicting threshold bands");
  }
  return {lo, hi};
}

double pick_target(const Band& band) {
  if (std::isinf(band.hi)) {
    return band.lo == 0.0 ? 1.0 : band.lo * 1.5;
  }
  // Midpoint keeps the target comfortably inside a finite band.
  return band.lo + (band.hi - band.lo) * 0.5;
}

}  // namespace

FixtureSpec FixtureSpec::all_pass(std::string region, std::vector<std::string> datasets,
                                  std::uint64_t samples_per_cell) {
  FixtureSpec spec;
  spec.region = std::move(region);
  spec.datasets = std::move(datasets);
  spec.samples_per_cell = samples_per_cell;
  for (auto& row : spec.pass) row.fill(true);
  return spec;
}

std::vector<MeasurementRecord> generate_fixture(std::uint64_t seed,
                                                const FixtureSpec& spec,
                                                const ThresholdTable& thresholds,
                                                const AggregationOptions& options) {
  if (spec.samples_per_cell == 0) {
    throw std::invalid_argument("fixture: samples_per_cell must be positive");
  }
  if (spec.datasets.empty()) {
    throw std::invalid_argument("fixture: at least one dataset required");
  }
  if (spec.region.empty()) {
    throw std::invalid_argument("fixture: region must be non-empty");
  }

  std::mt19937_64 rng(seed);
  std::vector<MeasurementRecord> records;
  Instant timestamp = kFixtureEpoch;

  std::vector<std::string> datasets = spec.datasets;
  std::sort(datasets.begin(), datasets.end());

  for (Metric metric : all_metrics()) {
    const Band band = solve_band(metric, spec, thresholds);
    if (std::isnan(band.lo)) continue;  // no use case needs this metric
    const double target = pick_target(band);

    const std::size_t n = spec.samples_per_cell;
    const std::size_t rank = tail_rank(n, options.percentile, metric_direction(metric));

    // Sample floor below the target: zero works for every metric domain.
    const double below_lo = 0.0;
    // Ceiling above it, clamped to the domain for fractions.
    double above_hi = target * 1.5 + 1.0;
    if (metric == Metric::PacketLoss) above_hi = std::min(above_hi, 1.0);

    std::uniform_real_distribution<double> below(below_lo, target);
    std::uniform_real_distribution<double> above(target, above_hi);

    for (const auto& dataset : datasets) {
      for (std::size_t i = 0; i < n; ++i) {
        double value;
        if (i + 1 == rank) {
          value = target;  // the tail-rank element is exactly the target
        } else if (i + 1 < rank) {
          value = below(rng);
        } else {
          value = above(rng);
        }
        records.push_back({spec.region, dataset, metric, value, timestamp});
        timestamp += 60'000'000;  // one minute apart
      }
    }
  }

  // Verify: re-aggregate and score each cell, then compare against the plan.
  for (Metric metric : all_metrics()) {
    for (const auto& dataset : datasets) {
      const auto stat = aggregate_region(records, spec.region, dataset, metric,
                                         options.percentile, PercentileMode::Tail,
                                         options);
      for (UseCase u : all_use_cases()) {
        const auto threshold = thresholds.get(u, metric, spec.level);
        if (!threshold) continue;
        if (!stat) {
          throw std::logic_error("fixture: verification failed: missing aggregate");
        }
        const int score =
            binary_requirement_score(*stat, *threshold, metric_direction(metric));
        if (score != (cell(spec.pass, u, metric) ? 1 : 0)) {
          throw std::logic_error("fixture: verification failed for (" +
                                 std::string(to_token(u)) + ", " +
                                 std::string(to_token(metric)) + ", " + dataset + ")");
        }
      }
    }
  }
  return records;
}

}  // namespace iqb
