#include "iqb/weights.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace iqb {
namespace {

std::string weight_key(UseCase u) {
  return std::string("weights.use_cases.") + std::string(to_token(u));
}

std::string weight_key(UseCase u, Metric m) {
  return std::string("weights.requirements.") + std::string(to_token(u)) + "." +
         std::string(to_token(m));
}

std::string weight_key(UseCase u, Metric m, const std::string& dataset) {
  return std::string("weights.datasets.") + std::string(to_token(u)) + "." +
         std::string(to_token(m)) + "." + dataset;
}

void check_range(std::vector<Finding>& out, int w, std::string key) {
  if (w < kMinWeight || w > kMaxWeight) {
    out.push_back({Finding::Severity::Error, "weight_out_of_range", std::move(key),
                   "weight out of range [0,5] (got " + std::to_string(w) + ")"});
  }
}

}  // namespace

int WeightTable::dataset_weight(UseCase u, Metric m, const std::string& dataset) const {
  const auto it = dataset_weights.find(dataset);
  if (it == dataset_weights.end()) return 0;
  return cell(it->second, u, m);
}

double NormalizedWeights::dataset_weight(UseCase u, Metric m,
                                         const std::string& dataset) const {
  const auto it = dataset_weights.find(dataset);
  if (it == dataset_weights.end()) return 0.0;
  return cell(it->second, u, m);
}

WeightTable default_weight_table() {
  WeightTable w;
  w.use_case_weights.fill(1);

  // Requirement weights, rows in use-case order, columns
  // (download, upload, latency, packet loss).
  constexpr UseCaseMetricTable<int> kRequirementDefaults = {{
      {3, 2, 4, 4},  // web_browsing
      {4, 2, 4, 4},  // video_streaming
      {4, 1, 3, 4},  // audio_streaming
      {4, 4, 4, 4},  // video_conferencing
      {4, 4, 2, 4},  // online_backup
      {4, 4, 5, 4},  // gaming
  }};
  w.requirement_weights = kRequirementDefaults;

  UseCaseMetricTable<int> ones;
  for (auto& row : ones) row.fill(1);
  for (std::string_view d : kCanonicalDatasets) {
    w.dataset_weights.emplace(std::string(d), ones);
  }
  return w;
}

std::vector<Finding> validate_weight_table(const WeightTable& w) {
  std::vector<Finding> findings;

  for (UseCase u : all_use_cases()) {
    check_range(findings, w.use_case_weight(u), weight_key(u));
  }
  for (UseCase u : all_use_cases()) {
    bool any_positive = false;
    for (Metric m : all_metrics()) {
      const int wr = w.requirement_weight(u, m);
      check_range(findings, wr, weight_key(u, m));
      if (wr > 0) any_positive = true;
    }
    if (!any_positive) {
      findings.push_back({Finding::Severity::Error, "no_positive_requirement_weight",
                          std::string("weights.requirements.") + std::string(to_token(u)),
                          "no positive requirement weight for " +
                              std::string(to_token(u))});
    }
  }
  for (const auto& [dataset, table] : w.dataset_weights) {
    for (UseCase u : all_use_cases()) {
      for (Metric m : all_metrics()) {
        check_range(findings, cell(table, u, m), weight_key(u, m, dataset));
      }
    }
  }
  // Every in-scope (use case, metric) needs a positive dataset weight, else
  // its normalization divides by zero.
  for (UseCase u : all_use_cases()) {
    for (Metric m : all_metrics()) {
      if (w.requirement_weight(u, m) <= 0) continue;
      bool any_positive = false;
      for (const auto& [dataset, table] : w.dataset_weights) {
        if (cell(table, u, m) > 0) {
          any_positive = true;
          break;
        }
      }
      if (!any_positive) {
        findings.push_back(
            {Finding::Severity::Error, "no_positive_dataset_weight",
             std::string("weights.datasets.") + std::string(to_token(u)) + "." +
                 std::string(to_token(m)),
             "no positive dataset weight for (" + std::string(to_token(u)) + ", " +
                 std::string(to_token(m)) + ")"});
      }
    }
  }
  return findings;
}

NormalizedWeights normalize_weights(const WeightTable& w) {
  NormalizedWeights n;

  const long use_case_sum =
      std::accumulate(w.use_case_weights.begin(), w.use_case_weights.end(), 0L);
  if (use_case_sum <= 0) {
    throw std::domain_error("normalize_weights: zero-sum tier weights.use_cases");
  }
  for (UseCase u : all_use_cases()) {
    n.use_case_weights[static_cast<std::size_t>(u)] =
        static_cast<double>(w.use_case_weight(u)) / static_cast<double>(use_case_sum);
  }

  for (UseCase u : all_use_cases()) {
    long row_sum = 0;
    for (Metric m : all_metrics()) row_sum += w.requirement_weight(u, m);
    if (row_sum <= 0) {
      throw std::domain_error("normalize_weights: zero-sum tier weights.requirements." +
                              std::string(to_token(u)));
    }
    for (Metric m : all_metrics()) {
      cell(n.requirement_weights, u, m) =
          static_cast<double>(w.requirement_weight(u, m)) /
          static_cast<double>(row_sum);
    }
  }

  for (const auto& [dataset, table] : w.dataset_weights) {
    n.dataset_weights.emplace(dataset, UseCaseMetricTable<double>{});
  }
  for (UseCase u : all_use_cases()) {
    for (Metric m : all_metrics()) {
      long group_sum = 0;
      for (const auto& [dataset, table] : w.dataset_weights) {
        group_sum += cell(table, u, m);
      }
      if (group_sum <= 0) {
        // Only an error when the group actually feeds a score.
        if (w.requirement_weight(u, m) > 0) {
          throw std::domain_error("normalize_weights: zero-sum tier weights.datasets." +
                                  std::string(to_token(u)) + "." +
                                  std::string(to_token(m)));
        }
        continue;
      }
      for (const auto& [dataset, table] : w.dataset_weights) {
        cell(n.dataset_weights.at(dataset), u, m) =
            static_cast<double>(cell(table, u, m)) / static_cast<double>(group_sum);
      }
    }
  }
  return n;
}

}  // namespace iqb
