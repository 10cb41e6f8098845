#include "iqb/measurement.hpp"

#include <cstdio>
#include <string>

namespace iqb {

namespace {

// "95", "97.5", "99.999" — trailing zeros trimmed.
std::string format_percentile(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", p);
  std::string s(buf);
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    auto last = s.find_last_not_of('0');
    if (last == dot) last -= 1;
    s.erase(last + 1);
  }
  return s;
}

}  // namespace

std::string statistic_token(StatisticKind kind, double percentile) {
  switch (kind) {
    case StatisticKind::TailPercentile:
      return "p" + format_percentile(percentile) + "_tail";
    case StatisticKind::LiteralPercentile:
      return "p" + format_percentile(percentile);
    case StatisticKind::Provided:
      return "provided";
  }
  return "?";
}

std::optional<PercentileStatistic> parse_statistic_token(std::string_view token) {
  if (token.size() < 2 || token[0] != 'p') return std::nullopt;
  std::string_view rest = token.substr(1);
  bool tail = false;
  if (rest.size() > 5 && rest.substr(rest.size() - 5) == "_tail") {
    tail = true;
    rest = rest.substr(0, rest.size() - 5);
  }
  // Digits with at most one dot.
  bool seen_dot = false;
  for (char c : rest) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (c < '0' || c > '9') {
      return std::nullopt;
    }
  }
  if (rest.empty() || rest.front() == '.' || rest.back() == '.') return std::nullopt;
  const double p = std::stod(std::string(rest));
  if (!(p > 0.0) || p > 100.0) return std::nullopt;
  if (tail && p >= 100.0) return std::nullopt;
  return PercentileStatistic{p, tail};
}

}  // namespace iqb
