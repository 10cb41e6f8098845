#include "iqb/rfc3339.hpp"

#include <chrono>
#include <cstdio>

namespace iqb {
namespace {

constexpr std::int64_t kMicrosPerSecond = 1'000'000;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::optional<int> parse_int(std::string_view s) {
  if (!all_digits(s)) return std::nullopt;
  int v = 0;
  for (char c : s) {
    v = v * 10 + (c - '0');
    if (v > 1'000'000'000) return std::nullopt;
  }
  return v;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[m - 1];
}

}  // namespace

std::optional<Instant> parse_rfc3339(std::string_view s) {
  // Minimal shape: YYYY-MM-DDTHH:MM:SS + (Z | ±hh:mm), optional .fraction.
  if (s.size() < 20) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':') {
    return std::nullopt;
  }
  auto year = parse_int(s.substr(0, 4));
  auto month = parse_int(s.substr(5, 2));
  auto day = parse_int(s.substr(8, 2));
  auto hour = parse_int(s.substr(11, 2));
  auto minute = parse_int(s.substr(14, 2));
  auto second = parse_int(s.substr(17, 2));
  if (!year || !month || !day || !hour || !minute || !second) return std::nullopt;
  if (*month < 1 || *month > 12) return std::nullopt;
  if (*day < 1 || *day > days_in_month(*year, *month)) return std::nullopt;
  // Leap seconds are clamped to :59.
  if (*hour > 23 || *minute > 59 || *second > 60) return std::nullopt;
  if (*second == 60) second = 59;

  std::size_t pos = 19;
  std::int64_t micros = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    std::int64_t frac = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      if (digits < 6) frac = frac * 10 + (s[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) return std::nullopt;
    for (std::size_t i = digits; i < 6; ++i) frac *= 10;
    micros = frac;
  }

  if (pos >= s.size()) return std::nullopt;
  std::int64_t offset_seconds = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    if (pos + 6 > s.size() || s[pos + 3] != ':') return std::nullopt;
    auto oh = parse_int(s.substr(pos + 1, 2));
    auto om = parse_int(s.substr(pos + 4, 2));
    if (!oh || !om || *oh > 23 || *om > 59) return std::nullopt;
    offset_seconds = static_cast<std::int64_t>(*oh) * 3600 + *om * 60;
    if (s[pos] == '-') offset_seconds = -offset_seconds;
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  const std::int64_t days = days_from_civil(*year, *month, *day);
  std::int64_t seconds = days * 86400 + *hour * 3600 + *minute * 60 + *second;
  seconds -= offset_seconds;
  return seconds * kMicrosPerSecond + micros;
}

std::string format_rfc3339(Instant t) {
  std::int64_t seconds = t / kMicrosPerSecond;
  std::int64_t micros = t % kMicrosPerSecond;
  if (micros < 0) {
    micros += kMicrosPerSecond;
    seconds -= 1;
  }
  std::int64_t days = seconds / 86400;
  std::int64_t rem = seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  const int hh = static_cast<int>(rem / 3600);
  const int mm = static_cast<int>((rem % 3600) / 60);
  const int ss = static_cast<int>(rem % 60);

  char buf[40];
  if (micros != 0) {
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ", y, m, d, hh,
                  mm, ss, static_cast<long long>(micros));
  } else {
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d, hh, mm, ss);
  }
  return buf;
}

Instant now_utc() {
  const auto now = std::chrono::system_clock::now();
  return std::chrono::duration_cast<std::chrono::microseconds>(now.time_since_epoch())
      .count();
}

std::optional<TimeWindow> parse_time_window(std::string_view text) {
  const auto sep = text.find("..");
  if (sep == std::string_view::npos) return std::nullopt;
  const auto start = parse_rfc3339(text.substr(0, sep));
  const auto end = parse_rfc3339(text.substr(sep + 2));
  if (!start || !end || *start > *end) return std::nullopt;
  return TimeWindow{*start, *end};
}

}  // namespace iqb
