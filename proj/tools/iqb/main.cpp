#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "iqb/version.hpp"

namespace {

// Flag value first, then the IQB_CONFIG environment variable.
bool resolve_config(std::string& path) {
  if (path.empty()) {
    if (const char* env = std::getenv("IQB_CONFIG"); env && *env) path = env;
  }
  if (path.empty()) {
    std::cerr << "error: no config file given (--config or IQB_CONFIG)\n";
    return false;
  }
  return true;
}

void add_common_options(CLI::App* cmd, std::string& config_path,
                        std::vector<std::string>& inputs,
                        std::vector<std::string>& adapter_paths) {
  cmd->add_option("-c,--config", config_path,
                  "Config file (JSON); defaults to $IQB_CONFIG");
  cmd->add_option("inputs", inputs, "Measurement CSV files")->required();
  cmd->add_option("--adapter", adapter_paths,
                  "Adapter spec JSON for non-canonical input layouts (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Internet quality scoring over multi-dataset measurements"};
  app.set_version_flag("--version", iqb::kVersion);
  app.require_subcommand(1);

  iqb::cli::ValidateArgs validate_args;
  auto* validate =
      app.add_subcommand("validate", "Check a config file and print findings");
  validate->add_option("config", validate_args.config_path,
                       "Config file (JSON); defaults to $IQB_CONFIG");

  iqb::cli::AggregateArgs aggregate_args;
  auto* aggregate = app.add_subcommand(
      "aggregate", "Aggregate measurements into per-region statistics");
  add_common_options(aggregate, aggregate_args.config_path, aggregate_args.inputs,
                     aggregate_args.adapter_paths);
  aggregate->add_option("--window", aggregate_args.window,
                        "Keep records inside <rfc3339>..<rfc3339>");
  aggregate->add_option("--out", aggregate_args.out, "Output path (default stdout)");

  iqb::cli::ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "Score regions and emit reports");
  add_common_options(score, score_args.config_path, score_args.inputs,
                     score_args.adapter_paths);
  score->add_option("--region", score_args.region, "Score only this region");
  score->add_option("--level", score_args.level, "Quality level: high or min")
      ->check(CLI::IsMember({"high", "min", "minimum"}));
  score->add_option("--format", score_args.format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  score->add_option("--out", score_args.out, "Output path (default stdout)");

  iqb::cli::ExplainArgs explain_args;
  auto* explain = app.add_subcommand(
      "explain", "Print the per-cell contribution table for a region");
  add_common_options(explain, explain_args.config_path, explain_args.inputs,
                     explain_args.adapter_paths);
  explain->add_option("--region", explain_args.region, "Region to explain")->required();
  explain->add_option("--use-case", explain_args.use_case, "Limit rows to one use case");
  explain->add_option("--level", explain_args.level, "Quality level: high or min")
      ->check(CLI::IsMember({"high", "min", "minimum"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    app.exit(e);
    return iqb::cli::kExitUsageError;
  }

  if (validate->parsed()) {
    if (!resolve_config(validate_args.config_path)) return iqb::cli::kExitUsageError;
    return iqb::cli::cmd_validate(validate_args);
  }
  if (aggregate->parsed()) {
    if (!resolve_config(aggregate_args.config_path)) return iqb::cli::kExitUsageError;
    return iqb::cli::cmd_aggregate(aggregate_args);
  }
  if (score->parsed()) {
    if (!resolve_config(score_args.config_path)) return iqb::cli::kExitUsageError;
    return iqb::cli::cmd_score(score_args);
  }
  if (explain->parsed()) {
    if (!resolve_config(explain_args.config_path)) return iqb::cli::kExitUsageError;
    return iqb::cli::cmd_explain(explain_args);
  }
  return iqb::cli::kExitUsageError;
}
