#include "iqb/types.hpp"

#include <algorithm>

namespace iqb {

std::string_view to_token(Metric m) {
  switch (m) {
    case Metric::DownloadThroughput: return "download_throughput";
    case Metric::UploadThroughput: return "upload_throughput";
    case Metric::Latency: return "latency";
    case Metric::PacketLoss: return "packet_loss";
  }
  return "?";
}

std::string_view to_token(UseCase u) {
  switch (u) {
    case UseCase::WebBrowsing: return "web_browsing";
    case UseCase::VideoStreaming: return "video_streaming";
    case UseCase::AudioStreaming: return "audio_streaming";
    case UseCase::VideoConferencing: return "video_conferencing";
    case UseCase::OnlineBackup: return "online_backup";
    case UseCase::Gaming: return "gaming";
  }
  return "?";
}

std::string_view to_token(QualityLevel level) {
  return level == QualityLevel::Minimum ? "minimum" : "high";
}

std::string_view to_token(Granularity g) {
  return g == Granularity::PerTest ? "per_test" : "pre_aggregated";
}

std::string_view to_token(Unit unit) {
  switch (unit) {
    case Unit::Mbps: return "Mbps";
    case Unit::Milliseconds: return "ms";
    case Unit::Fraction: return "fraction";
  }
  return "?";
}

std::optional<Metric> metric_from_token(std::string_view token) {
  for (Metric m : all_metrics()) {
    if (token == to_token(m)) return m;
  }
  return std::nullopt;
}

std::optional<UseCase> use_case_from_token(std::string_view token) {
  for (UseCase u : all_use_cases()) {
    if (token == to_token(u)) return u;
  }
  return std::nullopt;
}

std::optional<QualityLevel> quality_level_from_token(std::string_view token) {
  if (token == "minimum" || token == "min") return QualityLevel::Minimum;
  if (token == "high") return QualityLevel::High;
  return std::nullopt;
}

std::optional<Granularity> granularity_from_token(std::string_view token) {
  if (token == "per_test") return Granularity::PerTest;
  if (token == "pre_aggregated") return Granularity::PreAggregated;
  return std::nullopt;
}

bool valid_dataset_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

std::string to_string(const Finding& f) {
  std::string out;
  out += f.severity == Finding::Severity::Error ? "error" : "warning";
  out += ' ';
  out += f.key;
  out += ": ";
  out += f.message;
  return out;
}

bool has_errors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Finding::Severity::Error;
  });
}

}  // namespace iqb
