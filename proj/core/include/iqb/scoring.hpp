#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "iqb/aggregate.hpp"
#include "iqb/measurement.hpp"
#include "iqb/thresholds.hpp"
#include "iqb/types.hpp"
#include "iqb/weights.hpp"

namespace iqb {

struct ScoreKey {
  UseCase use_case = UseCase::WebBrowsing;
  Metric metric = Metric::DownloadThroughput;
  std::string dataset_id;

  friend bool operator==(const ScoreKey&, const ScoreKey&) = default;
  // Token-lexicographic, matching the fully specified report output order.
  friend bool operator<(const ScoreKey& a, const ScoreKey& b) {
    if (const auto au = to_token(a.use_case), bu = to_token(b.use_case); au != bu)
      return au < bu;
    if (const auto am = to_token(a.metric), bm = to_token(b.metric); am != bm)
      return am < bm;
    return a.dataset_id < b.dataset_id;
  }
};

// Binary requirement scores. Keys lacking data are absent, never zero;
// presence of a key is what "coverage" means.
using BinaryScoreMatrix = std::map<ScoreKey, int>;

// Raised when a region has no usable measurements at all — a distinct
// outcome, never conflated with a score of 0.
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a whole tier has no scorable entries (e.g. all weights zero).
struct UnscorableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 1 iff the aggregated value meets the threshold; boundary equality counts
// as met for both directions.
int binary_requirement_score(const AggregateStat& stat, double threshold,
                             Direction direction);

// Weighted average of binary dataset scores over the datasets present in
// `scores`; absent datasets are excluded and the denominator renormalizes.
// Throws UnscorableError when every present dataset has weight zero.
double requirement_agreement_score(const std::map<std::string, int>& scores,
                                   const std::map<std::string, int>& weights);

// Weighted average of agreement scores over present metrics.
double use_case_score(const std::map<Metric, double>& agreement,
                      const std::map<Metric, int>& weights);

// Weighted average of use-case scores.
double iqb_score(const std::map<UseCase, double>& use_case_scores,
                 const std::map<UseCase, int>& weights);

// The flattened triple sum over normalized weights. Requires full coverage:
// every key whose normalized weight product is positive must be present in
// the matrix — this form deliberately does not renormalize. Throws
// UnscorableError on a missing key.
double iqb_score_flat(const BinaryScoreMatrix& s_urd, const NormalizedWeights& nw);

// --- Score report -----------------------------------------------------------

struct DatasetScore {
  std::string dataset_id;
  int binary_score = 0;
  double aggregate_value = 0.0;
  double threshold = 0.0;
  // Normalized weight share w'_u * w'_{u,r} * w'_{u,r,d}, renormalized over
  // coverage; summing shares over cells with binary_score=1 yields s_iqb.
  double contribution = 0.0;
};

struct RequirementScore {
  Metric metric = Metric::DownloadThroughput;
  double score = 0.0;  // S_{u,r}
  std::vector<DatasetScore> datasets;
};

struct UseCaseReport {
  UseCase use_case = UseCase::WebBrowsing;
  double score = 0.0;  // S_u
  std::vector<RequirementScore> requirements;
};

struct ScoreReport {
  std::string region_id;
  QualityLevel quality_level = QualityLevel::High;
  double s_iqb = 0.0;
  std::vector<UseCaseReport> use_cases;  // token-lexicographic order
  std::vector<Finding> warnings;

  const UseCaseReport* find(UseCase u) const;
  const RequirementScore* find(UseCase u, Metric m) const;
  const DatasetScore* find(UseCase u, Metric m, const std::string& dataset) const;
  BinaryScoreMatrix binary_matrix() const;
};

// Scores one region end to end: fills the binary matrix from aggregates and
// thresholds at the given level, rolls up through the three tiers with
// renormalization over covered keys, and computes per-cell weight shares.
// Warnings carried by the aggregates plus renormalization notices are
// attached to the report.
//
// Throws InsufficientDataError when the region has no aggregates, and
// UnscorableError when renormalization leaves a tier empty.
ScoreReport score_region(const AggregateMatrix& matrix, const ThresholdTable& thresholds,
                         const WeightTable& weights, const std::string& region_id,
                         QualityLevel level);

// Regions present in the matrix, sorted.
std::vector<std::string> regions_in(const AggregateMatrix& matrix);

}  // namespace iqb
