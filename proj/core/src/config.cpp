#include "iqb/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace iqb {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
  if (!obj.is_object()) {
    throw ConfigError("config: " + where + " must be an object");
  }
  for (const auto& item : obj.items()) {
    if (!required.count(item.key()) && !optional.count(item.key())) {
      throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
    }
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) {
      throw ConfigError("config: missing key '" + key + "' in " + where);
    }
  }
}

int parse_weight(const json& value, const std::string& where) {
  if (!value.is_number_integer()) {
    throw ConfigError("config: weight at " + where + " must be an integer");
  }
  return value.get<int>();
}

UseCase parse_use_case_key(const std::string& token, const std::string& where) {
  const auto u = use_case_from_token(token);
  if (!u) throw ConfigError("config: unknown use case '" + token + "' in " + where);
  return *u;
}

Metric parse_metric_key(const std::string& token, const std::string& where) {
  const auto m = metric_from_token(token);
  if (!m) throw ConfigError("config: unknown metric '" + token + "' in " + where);
  return *m;
}

void parse_weights_section(const json& section, Config& config) {
  require_keys(section, "weights", {}, {"use_cases", "requirements", "datasets"});

  if (section.contains("use_cases")) {
    config.weights.use_case_weights.fill(0);
    for (const auto& item : section.at("use_cases").items()) {
      const UseCase u = parse_use_case_key(item.key(), "weights.use_cases");
      config.weights.use_case_weights[static_cast<std::size_t>(u)] =
          parse_weight(item.value(), "weights.use_cases." + item.key());
    }
  }

  if (section.contains("requirements")) {
    for (auto& row : config.weights.requirement_weights) row.fill(0);
    for (const auto& uc_item : section.at("requirements").items()) {
      const UseCase u = parse_use_case_key(uc_item.key(), "weights.requirements");
      if (!uc_item.value().is_object()) {
        throw ConfigError("config: weights.requirements." + uc_item.key() +
                          " must be an object");
      }
      for (const auto& m_item : uc_item.value().items()) {
        const Metric m = parse_metric_key(m_item.key(),
                                          "weights.requirements." + uc_item.key());
        cell(config.weights.requirement_weights, u, m) = parse_weight(
            m_item.value(), "weights.requirements." + uc_item.key() + "." + m_item.key());
      }
    }
  }

  if (section.contains("datasets")) {
    for (auto& [id, table] : config.weights.dataset_weights) {
      for (auto& row : table) row.fill(0);
    }
    for (const auto& uc_item : section.at("datasets").items()) {
      const UseCase u = parse_use_case_key(uc_item.key(), "weights.datasets");
      if (!uc_item.value().is_object()) {
        throw ConfigError("config: weights.datasets." + uc_item.key() +
                          " must be an object");
      }
      for (const auto& m_item : uc_item.value().items()) {
        const Metric m =
            parse_metric_key(m_item.key(), "weights.datasets." + uc_item.key());
        if (!m_item.value().is_object()) {
          throw ConfigError("config: weights.datasets." + uc_item.key() + "." +
                            m_item.key() + " must be an object");
        }
        for (const auto& d_item : m_item.value().items()) {
          const std::string& dataset = d_item.key();
          if (!config.find_dataset(dataset)) {
            throw ConfigError("config: weights.datasets references undeclared dataset '" +
                              dataset + "'");
          }
          cell(config.weights.dataset_weights.at(dataset), u, m) =
              parse_weight(d_item.value(), "weights.datasets." + uc_item.key() + "." +
                                               m_item.key() + "." + dataset);
        }
      }
    }
  }
}

void parse_thresholds_section(const json& section, Config& config) {
  if (!section.is_array()) {
    throw ConfigError("config: thresholds must be an array of rows");
  }
  for (const auto& row : section) {
    require_keys(row, "thresholds row", {"use_case", "metric", "minimum", "high", "unit"});
    const UseCase u =
        parse_use_case_key(row.at("use_case").get<std::string>(), "thresholds");
    const Metric m = parse_metric_key(row.at("metric").get<std::string>(), "thresholds");

    const std::string unit = row.at("unit").get<std::string>();
    if (unit != to_token(metric_unit(m))) {
      throw ConfigError("config: thresholds." + std::string(to_token(u)) + "." +
                        std::string(to_token(m)) + " unit must be '" +
                        std::string(to_token(metric_unit(m))) + "', got '" + unit + "'");
    }
    if (!row.at("minimum").is_number() || !row.at("high").is_number()) {
      throw ConfigError("config: thresholds." + std::string(to_token(u)) + "." +
                        std::string(to_token(m)) + " levels must be numbers");
    }
    if (config.thresholds.applicable(u, m)) {
      throw ConfigError("config: duplicate thresholds row for (" +
                        std::string(to_token(u)) + ", " + std::string(to_token(m)) + ")");
    }
    config.thresholds.set_pair(u, m, row.at("minimum").get<double>(),
                               row.at("high").get<double>());
  }
}

void parse_datasets_section(const json& section, Config& config) {
  if (!section.is_array() || section.empty()) {
    throw ConfigError("config: datasets must be a non-empty array of rows");
  }
  for (const auto& row : section) {
    require_keys(row, "datasets row", {"id", "granularity"}, {"statistic"});
    DatasetSpec spec;
    spec.id = row.at("id").get<std::string>();
    const std::string gran = row.at("granularity").get<std::string>();
    const auto g = granularity_from_token(gran);
    if (!g) {
      throw ConfigError("config: datasets." + spec.id + " unknown granularity '" + gran +
                        "'");
    }
    spec.granularity = *g;
    if (row.contains("statistic")) {
      spec.statistic = row.at("statistic").get<std::string>();
    } else {
      spec.statistic = spec.granularity == Granularity::PerTest ? "p95_tail" : "p95";
    }
    if (spec.granularity == Granularity::PerTest &&
        !parse_statistic_token(spec.statistic)) {
      throw ConfigError("config: datasets." + spec.id + " per-test statistic '" +
                        spec.statistic + "' must be p<N> or p<N>_tail");
    }
    if (config.find_dataset(spec.id)) {
      throw ConfigError("config: duplicate dataset id '" + spec.id + "'");
    }
    config.datasets.push_back(std::move(spec));
  }
  std::sort(config.datasets.begin(), config.datasets.end(),
            [](const DatasetSpec& a, const DatasetSpec& b) { return a.id < b.id; });

  // Per-test datasets must agree on the percentile they aggregate at.
  double percentile = 0.0;
  for (const auto& spec : config.datasets) {
    if (spec.granularity != Granularity::PerTest) continue;
    const auto parsed = parse_statistic_token(spec.statistic);
    if (percentile == 0.0) {
      percentile = parsed->percentile;
    } else if (parsed->percentile != percentile) {
      throw ConfigError("config: per-test datasets disagree on percentile (" +
                        std::to_string(percentile) + " vs " +
                        std::to_string(parsed->percentile) + ")");
    }
  }
}

}  // namespace

const DatasetSpec* Config::find_dataset(const std::string& id) const {
  for (const auto& spec : datasets) {
    if (spec.id == id) return &spec;
  }
  return nullptr;
}

std::map<std::string, DatasetAggregation> Config::dataset_rules() const {
  std::map<std::string, DatasetAggregation> rules;
  for (const auto& spec : datasets) {
    DatasetAggregation rule;
    rule.granularity = spec.granularity;
    rule.declared_statistic = spec.statistic;
    if (const auto parsed = parse_statistic_token(spec.statistic);
        parsed && spec.granularity == Granularity::PerTest) {
      rule.mode = parsed->tail ? PercentileMode::Tail : PercentileMode::Literal;
    }
    rules.emplace(spec.id, std::move(rule));
  }
  return rules;
}

double Config::percentile() const {
  for (const auto& spec : datasets) {
    if (spec.granularity != Granularity::PerTest) continue;
    if (const auto parsed = parse_statistic_token(spec.statistic)) {
      return parsed->percentile;
    }
  }
  return 95.0;
}

Config parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  require_keys(doc, "document root", {"thresholds", "datasets"}, {"weights"});

  Config config;
  try {
    parse_datasets_section(doc.at("datasets"), config);

    // Defaults before the weights section can override tier by tier: uniform
    // use-case weights, the published requirement weights, dataset weight 1
    // for every declared dataset.
    const WeightTable defaults = default_weight_table();
    config.weights.use_case_weights = defaults.use_case_weights;
    config.weights.requirement_weights = defaults.requirement_weights;
    UseCaseMetricTable<int> ones;
    for (auto& row : ones) row.fill(1);
    for (const auto& spec : config.datasets) {
      config.weights.dataset_weights.emplace(spec.id, ones);
    }

    if (doc.contains("weights")) {
      parse_weights_section(doc.at("weights"), config);
    }
    parse_thresholds_section(doc.at("thresholds"), config);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("config: cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const Config& config) {
  ordered_json doc;

  ordered_json use_cases = ordered_json::object();
  for (UseCase u : all_use_cases()) {
    use_cases[std::string(to_token(u))] = config.weights.use_case_weight(u);
  }
  ordered_json requirements = ordered_json::object();
  for (UseCase u : all_use_cases()) {
    ordered_json row = ordered_json::object();
    for (Metric m : all_metrics()) {
      row[std::string(to_token(m))] = config.weights.requirement_weight(u, m);
    }
    requirements[std::string(to_token(u))] = std::move(row);
  }
  ordered_json dataset_weights = ordered_json::object();
  for (UseCase u : all_use_cases()) {
    ordered_json per_metric = ordered_json::object();
    for (Metric m : all_metrics()) {
      ordered_json per_dataset = ordered_json::object();
      for (const auto& [id, table] : config.weights.dataset_weights) {
        per_dataset[id] = cell(table, u, m);
      }
      per_metric[std::string(to_token(m))] = std::move(per_dataset);
    }
    dataset_weights[std::string(to_token(u))] = std::move(per_metric);
  }
  doc["weights"] = {{"use_cases", std::move(use_cases)},
                    {"requirements", std::move(requirements)},
                    {"datasets", std::move(dataset_weights)}};

  ordered_json thresholds = ordered_json::array();
  for (UseCase u : all_use_cases()) {
    for (Metric m : all_metrics()) {
      if (!config.thresholds.applicable(u, m)) continue;
      ordered_json row = ordered_json::object();
      row["use_case"] = std::string(to_token(u));
      row["metric"] = std::string(to_token(m));
      row["minimum"] = *config.thresholds.get(u, m, QualityLevel::Minimum);
      row["high"] = *config.thresholds.get(u, m, QualityLevel::High);
      row["unit"] = std::string(to_token(metric_unit(m)));
      thresholds.push_back(std::move(row));
    }
  }
  doc["thresholds"] = std::move(thresholds);

  ordered_json datasets = ordered_json::array();
  for (const auto& spec : config.datasets) {
    ordered_json row = ordered_json::object();
    row["id"] = spec.id;
    row["granularity"] = std::string(to_token(spec.granularity));
    row["statistic"] = spec.statistic;
    datasets.push_back(std::move(row));
  }
  doc["datasets"] = std::move(datasets);

  return doc.dump(2) + "\n";
}

std::vector<Finding> validate_config(const Config& config) {
  std::vector<Finding> findings = validate_weight_table(config.weights);
  const auto threshold_findings = validate_threshold_table(config.thresholds);
  findings.insert(findings.end(), threshold_findings.begin(), threshold_findings.end());

  for (const auto& spec : config.datasets) {
    if (!valid_dataset_id(spec.id)) {
      findings.push_back({Finding::Severity::Error, "dataset_id_invalid",
                          "datasets." + spec.id,
                          "dataset id must match [a-z0-9_-]+"});
    }
    if (spec.statistic.empty()) {
      findings.push_back({Finding::Severity::Error, "statistic_missing",
                          "datasets." + spec.id, "statistic token must be non-empty"});
    }
  }
  return findings;
}

}  // namespace iqb
