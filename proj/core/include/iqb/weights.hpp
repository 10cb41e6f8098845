#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "iqb/types.hpp"

namespace iqb {

// Fixed-size table over the closed (use case, metric) domain.
template <typename T>
using UseCaseMetricTable = std::array<std::array<T, kMetricCount>, kUseCaseCount>;

template <typename T>
constexpr T& cell(UseCaseMetricTable<T>& t, UseCase u, Metric m) {
  return t[static_cast<std::size_t>(u)][static_cast<std::size_t>(m)];
}

template <typename T>
constexpr const T& cell(const UseCaseMetricTable<T>& t, UseCase u, Metric m) {
  return t[static_cast<std::size_t>(u)][static_cast<std::size_t>(m)];
}

// The three tiers of raw integer weights. All weights live in [0,5]; a zero
// weight excludes its key from scoring.
struct WeightTable {
  std::array<int, kUseCaseCount> use_case_weights{};
  UseCaseMetricTable<int> requirement_weights{};
  // Per dataset id, one (use case, metric) table. Dataset ids come from the
  // configuration, not from a closed enum.
  std::map<std::string, UseCaseMetricTable<int>> dataset_weights;

  int use_case_weight(UseCase u) const {
    return use_case_weights[static_cast<std::size_t>(u)];
  }
  int requirement_weight(UseCase u, Metric m) const {
    return cell(requirement_weights, u, m);
  }
  int dataset_weight(UseCase u, Metric m, const std::string& dataset) const;

  friend bool operator==(const WeightTable&, const WeightTable&) = default;
};

// Same shape as WeightTable with each tier divided by its tier sum.
// Groups whose raw sum is zero are only legal when the group is irrelevant
// (parent weight zero); normalize_weights enforces that.
struct NormalizedWeights {
  std::array<double, kUseCaseCount> use_case_weights{};
  UseCaseMetricTable<double> requirement_weights{};
  std::map<std::string, UseCaseMetricTable<double>> dataset_weights;

  double use_case_weight(UseCase u) const {
    return use_case_weights[static_cast<std::size_t>(u)];
  }
  double requirement_weight(UseCase u, Metric m) const {
    return cell(requirement_weights, u, m);
  }
  double dataset_weight(UseCase u, Metric m, const std::string& dataset) const;
};

inline constexpr int kMinWeight = 0;
inline constexpr int kMaxWeight = 5;

inline constexpr std::array<std::string_view, 3> kCanonicalDatasets = {
    "ndt", "ookla", "cloudflare"};

// Defaults: the published requirement-weight table (six use cases x four
// metrics), uniform use-case weights, and dataset weight 1 for the three
// canonical public datasets.
WeightTable default_weight_table();

// Empty iff all WeightTable invariants hold: every weight in [0,5], each use
// case has a positive requirement weight, and each (use case, metric) with a
// positive requirement weight has a positive dataset weight somewhere.
std::vector<Finding> validate_weight_table(const WeightTable& w);

// Divides each tier by its tier sum. Throws std::domain_error naming the tier
// and key when a relevant group sums to zero.
NormalizedWeights normalize_weights(const WeightTable& w);

}  // namespace iqb
