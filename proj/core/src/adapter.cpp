#include "iqb/adapter.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace iqb {
namespace {

constexpr const char* kPerTestFields[] = {"region_id", "metric", "value", "unit",
                                          "timestamp"};
constexpr const char* kPreAggFields[] = {"region_id", "metric", "statistic", "value",
                                         "unit"};

struct UnitConversion {
  Unit target;
  double factor;
};

// Built-in source units. Adapter specs may extend this with factors that are
// applied verbatim.
const std::map<std::string, UnitConversion>& builtin_units() {
  static const std::map<std::string, UnitConversion> kUnits = {
      {"Mbps", {Unit::Mbps, 1.0}},       {"mbps", {Unit::Mbps, 1.0}},
      {"kbps", {Unit::Mbps, 0.001}},     {"Kbps", {Unit::Mbps, 0.001}},
      {"Gbps", {Unit::Mbps, 1000.0}},    {"bps", {Unit::Mbps, 1e-6}},
      {"ms", {Unit::Milliseconds, 1.0}}, {"s", {Unit::Milliseconds, 1000.0}},
      {"us", {Unit::Milliseconds, 0.001}},
      {"fraction", {Unit::Fraction, 1.0}},
      {"percent", {Unit::Fraction, 0.01}},
      {"%", {Unit::Fraction, 0.01}},
  };
  return kUnits;
}

std::optional<double> parse_number(const std::string& text) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_count(const std::string& text) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

// Resolves canonical field -> column index, or throws when the adapter's
// columns are not all present.
std::map<std::string, std::size_t> resolve_columns(const CsvTable& input,
                                                   const AdapterSpec& spec) {
  std::map<std::string, std::size_t> by_field;
  for (std::size_t i = 0; i < input.header.size(); ++i) {
    const auto it = spec.column_map.find(input.header[i]);
    if (it != spec.column_map.end()) {
      by_field[it->second] = i;
    }
  }
  std::vector<std::string> required;
  if (spec.granularity == Granularity::PerTest) {
    required.assign(std::begin(kPerTestFields), std::end(kPerTestFields));
  } else {
    required.assign(std::begin(kPreAggFields), std::end(kPreAggFields));
  }
  if (spec.dataset.empty()) required.push_back("dataset_id");
  for (const auto& field : required) {
    if (!by_field.count(field)) {
      throw std::runtime_error("adapter: input is missing a column for canonical field '" +
                               field + "'");
    }
  }
  return by_field;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

AdapterSpec canonical_per_test_adapter() {
  AdapterSpec spec;
  spec.granularity = Granularity::PerTest;
  for (const char* field :
       {"region_id", "dataset_id", "metric", "value", "unit", "timestamp"}) {
    spec.column_map.emplace(field, field);
  }
  return spec;
}

AdapterSpec canonical_pre_aggregated_adapter() {
  AdapterSpec spec;
  spec.granularity = Granularity::PreAggregated;
  for (const char* field : {"region_id", "dataset_id", "metric", "statistic", "value",
                            "unit", "sample_count"}) {
    spec.column_map.emplace(field, field);
  }
  return spec;
}

bool adapter_matches(const AdapterSpec& spec, const std::vector<std::string>& header) {
  for (const auto& [source, field] : spec.column_map) {
    if (std::find(header.begin(), header.end(), source) == header.end()) return false;
  }
  return true;
}

AdapterSpec parse_adapter_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("adapter: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("adapter: document must be an object");

  static const std::set<std::string> kKnown = {"dataset", "granularity", "column_map",
                                               "unit_conversions"};
  for (const auto& item : doc.items()) {
    if (!kKnown.count(item.key())) {
      throw std::runtime_error("adapter: unknown key '" + item.key() + "'");
    }
  }

  AdapterSpec spec;
  try {
    if (doc.contains("dataset")) {
      spec.dataset = doc.at("dataset").get<std::string>();
      if (!valid_dataset_id(spec.dataset)) {
        throw std::runtime_error("adapter: invalid dataset id '" + spec.dataset + "'");
      }
    }
    const std::string gran = doc.at("granularity").get<std::string>();
    const auto g = granularity_from_token(gran);
    if (!g) throw std::runtime_error("adapter: unknown granularity '" + gran + "'");
    spec.granularity = *g;

    static const std::set<std::string> kCanonicalFields = {
        "region_id", "dataset_id", "metric",    "value",
        "unit",      "timestamp",  "statistic", "sample_count"};
    for (const auto& item : doc.at("column_map").items()) {
      const std::string field = item.value().get<std::string>();
      if (!kCanonicalFields.count(field)) {
        throw std::runtime_error("adapter: unknown canonical field '" + field +
                                 "' in column_map");
      }
      spec.column_map[item.key()] = field;
    }
    if (doc.contains("unit_conversions")) {
      for (const auto& item : doc.at("unit_conversions").items()) {
        const double factor = item.value().get<double>();
        if (!(factor > 0.0) || !std::isfinite(factor)) {
          throw std::runtime_error("adapter: unit factor for '" + item.key() +
                                   "' must be positive and finite");
        }
        spec.unit_conversions[item.key()] = factor;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("adapter: ") + e.what());
  }

  // The column map must cover the required canonical fields.
  std::set<std::string> mapped;
  for (const auto& [source, field] : spec.column_map) mapped.insert(field);
  const auto require = [&](const char* field) {
    if (!mapped.count(field)) {
      throw std::runtime_error(std::string("adapter: column_map does not cover '") +
                               field + "'");
    }
  };
  if (spec.granularity == Granularity::PerTest) {
    for (const char* f : kPerTestFields) require(f);
  } else {
    for (const char* f : kPreAggFields) require(f);
  }
  if (spec.dataset.empty()) require("dataset_id");
  return spec;
}

AdapterSpec load_adapter_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("adapter: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_adapter_spec(buf.str());
}

std::optional<double> convert_unit(Metric metric, const std::string& unit, double value,
                                   const std::map<std::string, double>& extra) {
  const auto& builtin = builtin_units();
  if (const auto it = builtin.find(unit); it != builtin.end()) {
    if (it->second.target != metric_unit(metric)) return std::nullopt;
    return value * it->second.factor;
  }
  if (const auto it = extra.find(unit); it != extra.end()) {
    return value * it->second;
  }
  return std::nullopt;
}

PerTestParseResult parse_per_test(const CsvTable& input, const AdapterSpec& spec,
                                  const std::optional<TimeWindow>& window) {
  if (spec.granularity != Granularity::PerTest) {
    throw std::invalid_argument("parse_per_test: adapter granularity is not per_test");
  }
  const auto columns = resolve_columns(input, spec);
  PerTestParseResult result;
  std::size_t window_filtered = 0;

  for (std::size_t i = 0; i < input.rows.size(); ++i) {
    const auto& row = input.rows[i];
    const std::size_t row_number = i + 1;
    const auto reject = [&](std::string reason) {
      result.rejects.push_back({row_number, std::move(reason)});
    };
    if (row.size() != input.header.size()) {
      reject("column count mismatch");
      continue;
    }
    const auto field = [&](const char* name) -> const std::string& {
      return row[columns.at(name)];
    };

    MeasurementRecord record;
    record.region_id = field("region_id");
    if (record.region_id.empty()) {
      reject("empty region_id");
      continue;
    }
    record.dataset_id = spec.dataset.empty() ? field("dataset_id") : spec.dataset;
    if (!valid_dataset_id(record.dataset_id)) {
      reject("invalid dataset id '" + record.dataset_id + "'");
      continue;
    }
    const auto metric = metric_from_token(field("metric"));
    if (!metric) {
      reject("unknown metric '" + field("metric") + "'");
      continue;
    }
    record.metric = *metric;

    const auto raw_value = parse_number(field("value"));
    if (!raw_value || !std::isfinite(*raw_value)) {
      reject("malformed value '" + field("value") + "'");
      continue;
    }
    const auto converted =
        convert_unit(record.metric, field("unit"), *raw_value, spec.unit_conversions);
    if (!converted) {
      reject("unknown unit '" + field("unit") + "' for " +
             std::string(to_token(record.metric)));
      continue;
    }
    record.value = *converted;
    if (record.value < 0.0 ||
        (record.metric == Metric::PacketLoss && record.value > 1.0)) {
      reject("value out of range");
      continue;
    }

    const auto ts = parse_rfc3339(field("timestamp"));
    if (!ts) {
      reject("malformed timestamp '" + field("timestamp") + "'");
      continue;
    }
    record.timestamp = *ts;

    if (window && !window->contains(record.timestamp)) {
      reject("outside time window");
      ++window_filtered;
      continue;
    }
    result.records.push_back(std::move(record));
  }

  if (window_filtered > 0) {
    result.notes.push_back({Finding::Severity::Warning, "window_filtered", "input",
                            std::to_string(window_filtered) +
                                " rows outside the time window"});
  }
  return result;
}

PreAggregatedParseResult parse_pre_aggregated(const CsvTable& input,
                                              const AdapterSpec& spec) {
  if (spec.granularity != Granularity::PreAggregated) {
    throw std::invalid_argument(
        "parse_pre_aggregated: adapter granularity is not pre_aggregated");
  }
  const auto columns = resolve_columns(input, spec);
  const bool has_sample_count = columns.count("sample_count") > 0;

  PreAggregatedParseResult result;
  std::set<std::tuple<std::string, std::string, Metric>> seen;

  for (std::size_t i = 0; i < input.rows.size(); ++i) {
    const auto& row = input.rows[i];
    const std::size_t row_number = i + 1;
    const auto reject = [&](std::string reason) {
      result.rejects.push_back({row_number, std::move(reason)});
    };
    if (row.size() != input.header.size()) {
      reject("column count mismatch");
      continue;
    }
    const auto field = [&](const char* name) -> const std::string& {
      return row[columns.at(name)];
    };

    AggregateStat stat;
    stat.kind = StatisticKind::Provided;
    stat.region_id = field("region_id");
    if (stat.region_id.empty()) {
      reject("empty region_id");
      continue;
    }
    stat.dataset_id = spec.dataset.empty() ? field("dataset_id") : spec.dataset;
    if (!valid_dataset_id(stat.dataset_id)) {
      reject("invalid dataset id '" + stat.dataset_id + "'");
      continue;
    }
    const auto metric = metric_from_token(field("metric"));
    if (!metric) {
      reject("unknown metric '" + field("metric") + "'");
      continue;
    }
    stat.metric = *metric;
    stat.statistic = field("statistic");
    if (stat.statistic.empty()) {
      reject("empty statistic");
      continue;
    }

    const auto raw_value = parse_number(field("value"));
    if (!raw_value || !std::isfinite(*raw_value)) {
      reject("malformed value '" + field("value") + "'");
      continue;
    }
    const auto converted =
        convert_unit(stat.metric, field("unit"), *raw_value, spec.unit_conversions);
    if (!converted) {
      reject("unknown unit '" + field("unit") + "' for " +
             std::string(to_token(stat.metric)));
      continue;
    }
    stat.value = *converted;
    if (stat.value < 0.0 || (stat.metric == Metric::PacketLoss && stat.value > 1.0)) {
      reject("value out of range");
      continue;
    }

    if (!seen.emplace(stat.region_id, stat.dataset_id, stat.metric).second) {
      reject("duplicate key (" + stat.region_id + ", " + stat.dataset_id + ", " +
             std::string(to_token(stat.metric)) + ")");
      continue;
    }

    if (has_sample_count && !field("sample_count").empty()) {
      const auto count = parse_count(field("sample_count"));
      if (!count) {
        reject("malformed sample_count '" + field("sample_count") + "'");
        seen.erase({stat.region_id, stat.dataset_id, stat.metric});
        continue;
      }
      stat.sample_count = *count;
    } else {
      stat.sample_count = 0;
      stat.warnings.push_back({Finding::Severity::Warning, "sample_count_missing",
                               stat.region_id + "." + stat.dataset_id + "." +
                                   std::string(to_token(stat.metric)),
                               "source did not report a sample count"});
    }
    result.stats.push_back(std::move(stat));
  }
  return result;
}

std::string format_measurement_csv(const std::vector<MeasurementRecord>& records) {
  std::string out = "region_id,dataset_id,metric,value,unit,timestamp\n";
  for (const auto& r : records) {
    out += format_csv_row({r.region_id, r.dataset_id, std::string(to_token(r.metric)),
                           format_value(r.value),
                           std::string(to_token(metric_unit(r.metric))),
                           format_rfc3339(r.timestamp)});
  }
  return out;
}

std::string format_aggregate_csv_header() {
  return "region_id,dataset_id,metric,statistic,value,unit,sample_count\n";
}

std::string format_aggregate_csv_row(const AggregateStat& stat) {
  char value[32];
  std::snprintf(value, sizeof(value), "%.6f", stat.value);
  return format_csv_row({stat.region_id, stat.dataset_id,
                         std::string(to_token(stat.metric)), stat.statistic, value,
                         std::string(to_token(metric_unit(stat.metric))),
                         std::to_string(stat.sample_count)});
}

std::string format_reject_csv(const std::vector<RejectRow>& rejects) {
  std::string out = "row_number,reason\n";
  for (const auto& r : rejects) {
    out += format_csv_row({std::to_string(r.row_number), r.reason});
  }
  return out;
}

}  // namespace iqb
