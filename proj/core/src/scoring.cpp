#include "iqb/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iqb {
namespace {

std::string cell_key(UseCase u, Metric m) {
  return std::string(to_token(u)) + "." + std::string(to_token(m));
}

std::string cell_key(UseCase u, Metric m, const std::string& dataset) {
  return cell_key(u, m) + "." + dataset;
}

}  // namespace

int binary_requirement_score(const AggregateStat& stat, double threshold,
                             Direction direction) {
  if (!std::isfinite(stat.value)) {
    throw std::invalid_argument("binary_requirement_score: non-finite aggregate");
  }
  if (direction == Direction::HigherIsBetter) {
    return stat.value >= threshold ? 1 : 0;
  }
  return stat.value <= threshold ? 1 : 0;
}

double requirement_agreement_score(const std::map<std::string, int>& scores,
                                   const std::map<std::string, int>& weights) {
  long denom = 0;
  long numer = 0;
  for (const auto& [dataset, s] : scores) {
    const auto it = weights.find(dataset);
    const int w = it == weights.end() ? 0 : it->second;
    denom += w;
    numer += static_cast<long>(w) * s;
  }
  if (denom <= 0) {
    throw UnscorableError("unscorable requirement: no positive dataset weight among "
                          "present datasets");
  }
  return static_cast<double>(numer) / static_cast<double>(denom);
}

double use_case_score(const std::map<Metric, double>& agreement,
                      const std::map<Metric, int>& weights) {
  double denom = 0.0;
  double numer = 0.0;
  for (const auto& [metric, s] : agreement) {
    const auto it = weights.find(metric);
    const int w = it == weights.end() ? 0 : it->second;
    denom += w;
    numer += w * s;
  }
  if (denom <= 0.0) {
    throw UnscorableError("unscorable use case: no positive requirement weight among "
                          "present metrics");
  }
  return numer / denom;
}

double iqb_score(const std::map<UseCase, double>& use_case_scores,
                 const std::map<UseCase, int>& weights) {
  double denom = 0.0;
  double numer = 0.0;
  for (const auto& [u, s] : use_case_scores) {
    const auto it = weights.find(u);
    const int w = it == weights.end() ? 0 : it->second;
    denom += w;
    numer += w * s;
  }
  if (denom <= 0.0) {
    throw UnscorableError("unscorable: no positive use-case weight among present use "
                          "cases");
  }
  return numer / denom;
}

double iqb_score_flat(const BinaryScoreMatrix& s_urd, const NormalizedWeights& nw) {
  double total = 0.0;
  for (UseCase u : all_use_cases()) {
    const double wu = nw.use_case_weight(u);
    for (Metric m : all_metrics()) {
      const double wur = cell(nw.requirement_weights, u, m);
      for (const auto& [dataset, table] : nw.dataset_weights) {
        const double product = wu * wur * cell(table, u, m);
        if (product <= 0.0) continue;
        const auto it = s_urd.find({u, m, dataset});
        if (it == s_urd.end()) {
          throw UnscorableError("flat form requires full coverage: missing " +
                                cell_key(u, m, dataset));
        }
        total += product * it->second;
      }
    }
  }
  return total;
}

const UseCaseReport* ScoreReport::find(UseCase u) const {
  for (const auto& uc : use_cases) {
    if (uc.use_case == u) return &uc;
  }
  return nullptr;
}

const RequirementScore* ScoreReport::find(UseCase u, Metric m) const {
  const auto* uc = find(u);
  if (!uc) return nullptr;
  for (const auto& req : uc->requirements) {
    if (req.metric == m) return &req;
  }
  return nullptr;
}

const DatasetScore* ScoreReport::find(UseCase u, Metric m,
                                      const std::string& dataset) const {
  const auto* req = find(u, m);
  if (!req) return nullptr;
  for (const auto& ds : req->datasets) {
    if (ds.dataset_id == dataset) return &ds;
  }
  return nullptr;
}

BinaryScoreMatrix ScoreReport::binary_matrix() const {
  BinaryScoreMatrix matrix;
  for (const auto& uc : use_cases) {
    for (const auto& req : uc.requirements) {
      for (const auto& ds : req.datasets) {
        matrix[{uc.use_case, req.metric, ds.dataset_id}] = ds.binary_score;
      }
    }
  }
  return matrix;
}

ScoreReport score_region(const AggregateMatrix& matrix, const ThresholdTable& thresholds,
                         const WeightTable& weights, const std::string& region_id,
                         QualityLevel level) {
  const bool region_present = std::any_of(
      matrix.begin(), matrix.end(),
      [&](const auto& kv) { return kv.first.region_id == region_id; });
  if (!region_present) {
    throw InsufficientDataError("insufficient data: no aggregates for region '" +
                                region_id + "'");
  }

  ScoreReport report;
  report.region_id = region_id;
  report.quality_level = level;

  // Stat warnings are shared across use cases; collect each once.
  std::vector<Finding> stat_warnings;

  // First pass: binary scores per covered (u, r, d) cell.
  struct RequirementData {
    std::map<std::string, int> dataset_scores;
    std::map<std::string, int> dataset_weights;
    std::map<std::string, const AggregateStat*> stats;
    double threshold = 0.0;
  };
  std::map<UseCase, std::map<Metric, RequirementData>> covered;

  for (UseCase u : all_use_cases()) {
    for (Metric m : all_metrics()) {
      const int wur = weights.requirement_weight(u, m);
      if (wur <= 0) continue;  // weight 0 excludes the requirement
      const auto threshold = thresholds.get(u, m, level);
      if (!threshold) continue;  // metric not applicable to this use case

      RequirementData data;
      data.threshold = *threshold;
      for (const auto& [dataset, table] : weights.dataset_weights) {
        const int wurd = cell(table, u, m);
        if (wurd <= 0) continue;
        const auto it = matrix.find({region_id, dataset, m});
        if (it == matrix.end()) {
          report.warnings.push_back(
              {Finding::Severity::Warning, "renormalized_missing_data",
               cell_key(u, m, dataset),
               "no aggregate for dataset '" + dataset +
                   "'; requirement renormalized over present datasets"});
          continue;
        }
        data.dataset_scores[dataset] =
            binary_requirement_score(it->second, *threshold, metric_direction(m));
        data.dataset_weights[dataset] = wurd;
        data.stats[dataset] = &it->second;
      }
      if (data.dataset_scores.empty()) {
        report.warnings.push_back(
            {Finding::Severity::Warning, "renormalized_missing_data", cell_key(u, m),
             "no dataset has data for this requirement; use case renormalized over "
             "present metrics"});
        continue;
      }
      covered[u][m] = std::move(data);
    }
  }

  if (covered.empty()) {
    throw UnscorableError("unscorable tier use_cases: no (use case, metric, dataset) "
                          "cell has both data and positive weight for region '" +
                          region_id + "'");
  }

  // Renormalized tier denominators over covered keys.
  long covered_use_case_sum = 0;
  for (const auto& [u, metrics] : covered) {
    covered_use_case_sum += weights.use_case_weight(u);
  }
  if (covered_use_case_sum <= 0) {
    throw UnscorableError("unscorable tier use_cases: covered use cases all have "
                          "weight zero");
  }
  for (UseCase u : all_use_cases()) {
    if (covered.find(u) == covered.end() && weights.use_case_weight(u) > 0) {
      report.warnings.push_back(
          {Finding::Severity::Warning, "renormalized_missing_data",
           std::string(to_token(u)),
           "use case has no scorable requirements; composite renormalized over "
           "present use cases"});
    }
  }

  // Second pass: roll up and record the report tree.
  std::map<UseCase, double> per_use_case;
  std::map<UseCase, int> per_use_case_weights;

  for (const auto& [u, metrics] : covered) {
    long covered_req_sum = 0;
    for (const auto& [m, data] : metrics) covered_req_sum += weights.requirement_weight(u, m);

    UseCaseReport uc_report;
    uc_report.use_case = u;

    std::map<Metric, double> agreements;
    std::map<Metric, int> req_weights;
    for (const auto& [m, data] : metrics) {
      const double s_ur =
          requirement_agreement_score(data.dataset_scores, data.dataset_weights);
      agreements[m] = s_ur;
      req_weights[m] = weights.requirement_weight(u, m);

      long covered_dataset_sum = 0;
      for (const auto& [dataset, w] : data.dataset_weights) covered_dataset_sum += w;

      RequirementScore req;
      req.metric = m;
      req.score = s_ur;
      for (const auto& [dataset, score] : data.dataset_scores) {
        DatasetScore ds;
        ds.dataset_id = dataset;
        ds.binary_score = score;
        ds.aggregate_value = data.stats.at(dataset)->value;
        ds.threshold = data.threshold;
        ds.contribution =
            (static_cast<double>(weights.use_case_weight(u)) / covered_use_case_sum) *
            (static_cast<double>(weights.requirement_weight(u, m)) / covered_req_sum) *
            (static_cast<double>(data.dataset_weights.at(dataset)) /
             covered_dataset_sum);
        req.datasets.push_back(std::move(ds));

        for (const auto& warning : data.stats.at(dataset)->warnings) {
          stat_warnings.push_back(warning);
        }
      }
      std::sort(req.datasets.begin(), req.datasets.end(),
                [](const DatasetScore& a, const DatasetScore& b) {
                  return a.dataset_id < b.dataset_id;
                });
      uc_report.requirements.push_back(std::move(req));
    }
    uc_report.score = use_case_score(agreements, req_weights);
    std::sort(uc_report.requirements.begin(), uc_report.requirements.end(),
              [](const RequirementScore& a, const RequirementScore& b) {
                return to_token(a.metric) < to_token(b.metric);
              });

    per_use_case[u] = uc_report.score;
    per_use_case_weights[u] = weights.use_case_weight(u);
    report.use_cases.push_back(std::move(uc_report));
  }

  report.s_iqb = iqb_score(per_use_case, per_use_case_weights);
  std::sort(report.use_cases.begin(), report.use_cases.end(),
            [](const UseCaseReport& a, const UseCaseReport& b) {
              return to_token(a.use_case) < to_token(b.use_case);
            });

  // Deduplicate stat warnings (one stat serves several use cases).
  std::sort(stat_warnings.begin(), stat_warnings.end(),
            [](const Finding& a, const Finding& b) {
              return std::tie(a.code, a.key) < std::tie(b.code, b.key);
            });
  stat_warnings.erase(std::unique(stat_warnings.begin(), stat_warnings.end()),
                      stat_warnings.end());
  report.warnings.insert(report.warnings.end(), stat_warnings.begin(),
                         stat_warnings.end());
  std::sort(report.warnings.begin(), report.warnings.end(),
            [](const Finding& a, const Finding& b) {
              return std::tie(a.code, a.key, a.message) <
                     std::tie(b.code, b.key, b.message);
            });
  report.warnings.erase(std::unique(report.warnings.begin(), report.warnings.end()),
                        report.warnings.end());
  return report;
}

std::vector<std::string> regions_in(const AggregateMatrix& matrix) {
  std::vector<std::string> regions;
  for (const auto& [key, stat] : matrix) regions.push_back(key.region_id);
  std::sort(regions.begin(), regions.end());
  regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
  return regions;
}

}  // namespace iqb
