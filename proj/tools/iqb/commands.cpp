#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "iqb/adapter.hpp"
#include "iqb/aggregate.hpp"
#include "iqb/config.hpp"
#include "iqb/csv.hpp"
#include "iqb/digest.hpp"
#include "iqb/report.hpp"
#include "iqb/scoring.hpp"
#include "iqb/version.hpp"

namespace iqb::cli {
namespace {

struct IngestedInputs {
  std::vector<MeasurementRecord> records;
  std::vector<AggregateStat> provided;
  std::size_t total_rows = 0;
  std::size_t total_rejects = 0;
};

// Routes one file to the adapter whose source columns its header carries:
// the canonical schemas first, then user-supplied adapters (ambiguity is an
// error).
const AdapterSpec* select_adapter(const std::vector<std::string>& header,
                                  const AdapterSpec& canonical_per_test,
                                  const AdapterSpec& canonical_pre_agg,
                                  const std::vector<AdapterSpec>& adapters,
                                  const std::string& path) {
  if (adapter_matches(canonical_per_test, header)) return &canonical_per_test;
  if (adapter_matches(canonical_pre_agg, header)) return &canonical_pre_agg;
  const AdapterSpec* selected = nullptr;
  for (const auto& spec : adapters) {
    if (!adapter_matches(spec, header)) continue;
    if (selected) {
      throw std::runtime_error(path + ": ambiguous input, multiple adapters match");
    }
    selected = &spec;
  }
  if (!selected) {
    throw std::runtime_error(path + ": no adapter matches the header columns");
  }
  return selected;
}

IngestedInputs ingest_inputs(const Config& config,
                             const std::vector<std::string>& inputs,
                             const std::vector<AdapterSpec>& adapters,
                             const std::optional<TimeWindow>& window) {
  const AdapterSpec canonical_per_test = canonical_per_test_adapter();
  const AdapterSpec canonical_pre_agg = canonical_pre_aggregated_adapter();

  IngestedInputs result;
  for (const auto& path : inputs) {
    const CsvTable table = load_csv(path);
    result.total_rows += table.rows.size();
    const AdapterSpec* spec = select_adapter(table.header, canonical_per_test,
                                             canonical_pre_agg, adapters, path);
    std::vector<RejectRow> rejects;
    if (spec->granularity == Granularity::PerTest) {
      auto parsed = parse_per_test(table, *spec, window);
      rejects = std::move(parsed.rejects);
      result.records.insert(result.records.end(),
                            std::make_move_iterator(parsed.records.begin()),
                            std::make_move_iterator(parsed.records.end()));
    } else {
      auto parsed = parse_pre_aggregated(table, *spec);
      rejects = std::move(parsed.rejects);
      result.provided.insert(result.provided.end(),
                             std::make_move_iterator(parsed.stats.begin()),
                             std::make_move_iterator(parsed.stats.end()));
    }
    result.total_rejects += rejects.size();
    for (const auto& reject : rejects) {
      std::cerr << path << ":" << reject.row_number << ": rejected: " << reject.reason
                << "\n";
    }
  }

  // Datasets absent from the config still aggregate, but scoring has no
  // weights for them; make that visible.
  for (const auto& r : result.records) {
    if (!config.find_dataset(r.dataset_id)) {
      std::cerr << "note: dataset '" << r.dataset_id
                << "' is not declared in the config; its data will not be scored\n";
      break;
    }
  }
  return result;
}

std::vector<AdapterSpec> load_adapters(const std::vector<std::string>& paths) {
  std::vector<AdapterSpec> adapters;
  adapters.reserve(paths.size());
  for (const auto& path : paths) {
    adapters.push_back(load_adapter_spec(path));
  }
  return adapters;
}

int write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return kExitSuccess;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitDataError;
  }
  out << content;
  return kExitSuccess;
}

// Loads and validates; returns nullopt after printing diagnostics, with the
// exit code in `code`.
std::optional<Config> load_valid_config(const std::string& path, int& code) {
  Config config;
  try {
    config = load_config(path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kExitUsageError;
    return std::nullopt;
  }
  const auto findings = validate_config(config);
  if (!findings.empty()) {
    for (const auto& f : findings) std::cerr << to_string(f) << "\n";
    code = kExitDataError;
    return std::nullopt;
  }
  return config;
}

RunManifest make_manifest(const std::string& config_path,
                          const std::vector<std::string>& inputs,
                          std::map<std::string, std::string> parameters) {
  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.config_digest = digest_file(config_path);
  for (const auto& path : inputs) {
    manifest.input_digests.emplace_back(path, digest_file(path));
  }
  manifest.started_at = now_utc();
  manifest.parameters = std::move(parameters);
  return manifest;
}

}  // namespace

int cmd_validate(const ValidateArgs& args) {
  Config config;
  try {
    config = load_config(args.config_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsageError;
  }
  const auto findings = validate_config(config);
  for (const auto& f : findings) {
    std::cout << to_string(f) << "\n";
  }
  return findings.empty() ? kExitSuccess : kExitDataError;
}

int cmd_aggregate(const AggregateArgs& args) {
  int code = kExitSuccess;
  const auto config = load_valid_config(args.config_path, code);
  if (!config) return code;

  std::optional<TimeWindow> window;
  if (!args.window.empty()) {
    window = parse_time_window(args.window);
    if (!window) {
      std::cerr << "error: --window must be <rfc3339>..<rfc3339> with start <= end\n";
      return kExitUsageError;
    }
  }

  try {
    const auto adapters = load_adapters(args.adapter_paths);
    const auto ingested = ingest_inputs(*config, args.inputs, adapters, window);
    const AggregationOptions options{config->percentile()};
    const auto matrix = build_aggregate_matrix(ingested.records, ingested.provided,
                                               config->dataset_rules(), options);
    if (matrix.empty()) {
      std::cerr << "error: no data" << (window ? " in the requested window" : "")
                << "\n";
      return kExitDataError;
    }
    std::string out = format_aggregate_csv_header();
    for (const auto& [key, stat] : matrix) {
      out += format_aggregate_csv_row(stat);
    }
    return write_output(args.out, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

namespace {

struct ScoredRegions {
  std::vector<ScoreReport> reports;
  std::vector<std::string> failures;  // diagnostics for unscorable regions
};

ScoredRegions score_regions(const Config& config, const AggregateMatrix& matrix,
                            const std::string& requested_region, QualityLevel level) {
  ScoredRegions result;
  std::vector<std::string> regions;
  if (!requested_region.empty()) {
    regions.push_back(requested_region);
  } else {
    regions = regions_in(matrix);
  }
  for (const auto& region : regions) {
    try {
      result.reports.push_back(
          score_region(matrix, config.thresholds, config.weights, region, level));
    } catch (const std::exception& e) {
      result.failures.push_back(e.what());
    }
  }
  return result;
}

}  // namespace

int cmd_score(const ScoreArgs& args) {
  int code = kExitSuccess;
  const auto config = load_valid_config(args.config_path, code);
  if (!config) return code;

  const auto level = quality_level_from_token(args.level);
  if (!level) {
    std::cerr << "error: --level must be 'high' or 'min'\n";
    return kExitUsageError;
  }
  if (args.format != "json" && args.format != "csv") {
    std::cerr << "error: --format must be 'json' or 'csv'\n";
    return kExitUsageError;
  }

  try {
    const auto adapters = load_adapters(args.adapter_paths);
    const auto ingested = ingest_inputs(*config, args.inputs, adapters, std::nullopt);
    const AggregationOptions options{config->percentile()};
    const auto matrix = build_aggregate_matrix(ingested.records, ingested.provided,
                                               config->dataset_rules(), options);
    const auto scored = score_regions(*config, matrix, args.region, *level);
    for (const auto& failure : scored.failures) {
      std::cerr << "error: " << failure << "\n";
    }

    std::string rendered;
    if (args.format == "json") {
      const auto manifest = make_manifest(
          args.config_path, args.inputs,
          {{"region", args.region.empty() ? "<all>" : args.region},
           {"level", std::string(to_token(*level))},
           {"format", args.format}});
      rendered = render_reports_json(manifest, scored.reports);
    } else {
      rendered = render_reports_csv(scored.reports);
    }
    const int write_code = write_output(args.out, rendered);
    if (write_code != kExitSuccess) return write_code;
    return scored.failures.empty() ? kExitSuccess : kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

int cmd_explain(const ExplainArgs& args) {
  int code = kExitSuccess;
  const auto config = load_valid_config(args.config_path, code);
  if (!config) return code;

  const auto level = quality_level_from_token(args.level);
  if (!level) {
    std::cerr << "error: --level must be 'high' or 'min'\n";
    return kExitUsageError;
  }
  std::optional<UseCase> use_case;
  if (!args.use_case.empty()) {
    use_case = use_case_from_token(args.use_case);
    if (!use_case) {
      std::cerr << "error: unknown use case '" << args.use_case << "'\n";
      return kExitUsageError;
    }
  }

  try {
    const auto adapters = load_adapters(args.adapter_paths);
    const auto ingested = ingest_inputs(*config, args.inputs, adapters, std::nullopt);
    const AggregationOptions options{config->percentile()};
    const auto matrix = build_aggregate_matrix(ingested.records, ingested.provided,
                                               config->dataset_rules(), options);
    const auto report =
        score_region(matrix, config->thresholds, config->weights, args.region, *level);
    std::cout << render_explain(report, use_case ? &*use_case : nullptr);
    return kExitSuccess;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace iqb::cli
