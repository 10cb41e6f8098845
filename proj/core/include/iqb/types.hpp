#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iqb {

// The four network requirements. Order matches the requirement-weight table
// columns and is load-bearing for the fixed-size weight tables below.
enum class Metric : std::uint8_t {
  DownloadThroughput = 0,
  UploadThroughput = 1,
  Latency = 2,
  PacketLoss = 3,
};

enum class Direction : std::uint8_t { HigherIsBetter, LowerIsBetter };

enum class Unit : std::uint8_t { Mbps, Milliseconds, Fraction };

// The six use cases, in the canonical row order of the requirement-weight
// table.
enum class UseCase : std::uint8_t {
  WebBrowsing = 0,
  VideoStreaming = 1,
  AudioStreaming = 2,
  VideoConferencing = 3,
  OnlineBackup = 4,
  Gaming = 5,
};

enum class QualityLevel : std::uint8_t { Minimum, High };

enum class Granularity : std::uint8_t { PerTest, PreAggregated };

inline constexpr std::size_t kMetricCount = 4;
inline constexpr std::size_t kUseCaseCount = 6;

constexpr std::array<Metric, kMetricCount> all_metrics() {
  return {Metric::DownloadThroughput, Metric::UploadThroughput, Metric::Latency,
          Metric::PacketLoss};
}

constexpr std::array<UseCase, kUseCaseCount> all_use_cases() {
  return {UseCase::WebBrowsing,       UseCase::VideoStreaming,
          UseCase::AudioStreaming,    UseCase::VideoConferencing,
          UseCase::OnlineBackup,      UseCase::Gaming};
}

constexpr Direction metric_direction(Metric m) {
  switch (m) {
    case Metric::DownloadThroughput:
    case Metric::UploadThroughput:
      return Direction::HigherIsBetter;
    case Metric::Latency:
    case Metric::PacketLoss:
      return Direction::LowerIsBetter;
  }
  return Direction::HigherIsBetter;
}

constexpr Unit metric_unit(Metric m) {
  switch (m) {
    case Metric::DownloadThroughput:
    case Metric::UploadThroughput:
      return Unit::Mbps;
    case Metric::Latency:
      return Unit::Milliseconds;
    case Metric::PacketLoss:
      return Unit::Fraction;
  }
  return Unit::Mbps;
}

std::string_view to_token(Metric m);
std::string_view to_token(UseCase u);
std::string_view to_token(QualityLevel level);
std::string_view to_token(Granularity g);
std::string_view to_token(Unit unit);

std::optional<Metric> metric_from_token(std::string_view token);
std::optional<UseCase> use_case_from_token(std::string_view token);
std::optional<QualityLevel> quality_level_from_token(std::string_view token);
std::optional<Granularity> granularity_from_token(std::string_view token);

// Dataset ids are opaque lowercase tokens: [a-z0-9_-]+
bool valid_dataset_id(std::string_view id);

// A validation finding or a runtime warning. Findings are data, not failures:
// validators return them and scoring attaches them to reports.
struct Finding {
  enum class Severity : std::uint8_t { Error, Warning };

  Severity severity = Severity::Error;
  std::string code;     // stable machine token, e.g. "weight_out_of_range"
  std::string key;      // dotted key path, e.g. "weights.requirements.gaming.latency"
  std::string message;  // human-readable detail

  friend bool operator==(const Finding&, const Finding&) = default;
};

std::string to_string(const Finding& f);

bool has_errors(const std::vector<Finding>& findings);

}  // namespace iqb
