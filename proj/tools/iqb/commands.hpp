#pragma once

#include <optional>
#include <string>
#include <vector>

namespace iqb::cli {

// Exit-code contract shared by every subcommand:
//   0 success, 1 data/validation failure, 2 usage/parse error.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsageError = 2;

struct ValidateArgs {
  std::string config_path;
};

struct AggregateArgs {
  std::string config_path;
  std::vector<std::string> inputs;
  std::vector<std::string> adapter_paths;
  std::string window;  // "start..end", RFC 3339 ends; empty = no filter
  std::string out;     // empty = stdout
};

struct ScoreArgs {
  std::string config_path;
  std::vector<std::string> inputs;
  std::vector<std::string> adapter_paths;
  std::string region;  // empty = all regions in the data
  std::string level = "high";
  std::string format = "json";
  std::string out;
};

struct ExplainArgs {
  std::string config_path;
  std::vector<std::string> inputs;
  std::vector<std::string> adapter_paths;
  std::string region;
  std::string use_case;  // empty = all
  std::string level = "high";
};

int cmd_validate(const ValidateArgs& args);
int cmd_aggregate(const AggregateArgs& args);
int cmd_score(const ScoreArgs& args);
int cmd_explain(const ExplainArgs& args);

}  // namespace iqb::cli
