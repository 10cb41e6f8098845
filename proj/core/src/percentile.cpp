#include "iqb/percentile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace iqb {

namespace {
constexpr std::int64_t kMicroFull = 100'000'000;  // 100% in micro-percentiles
}

std::int64_t to_micro_percentile(double p) {
  return std::llround(p * 1'000'000.0);
}

std::size_t nearest_rank(std::size_t n, double p) {
  const std::int64_t micro = to_micro_percentile(p);
  if (micro <= 0 || micro > kMicroFull) {
    throw std::invalid_argument("percentile out of range (0,100]: " + std::to_string(p));
  }
  const std::int64_t product = micro * static_cast<std::int64_t>(n);
  const std::int64_t rank = (product + kMicroFull - 1) / kMicroFull;  // ceil
  return static_cast<std::size_t>(std::max<std::int64_t>(1, rank));
}

double nearest_rank_percentile(std::span<const double> values, double p) {
  if (values.empty()) {
    throw std::invalid_argument("nearest_rank_percentile: no samples");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument("nearest_rank_percentile: non-finite value at index " +
                                  std::to_string(i));
    }
  }
  const std::size_t rank = nearest_rank(values.size(), p);
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
  return sorted[rank - 1];
}

double tail_percentile_for(Metric metric, double p) {
  if (!(p > 0.0 && p < 100.0)) {
    throw std::invalid_argument("tail percentile requires p in (0,100)");
  }
  return metric_direction(metric) == Direction::LowerIsBetter ? p : 100.0 - p;
}

std::size_t tail_rank(std::size_t n, double p, Direction direction) {
  const std::int64_t micro = to_micro_percentile(p);
  if (micro <= 0 || micro >= kMicroFull) {
    throw std::invalid_argument("tail percentile requires p in (0,100)");
  }
  if (n == 0) {
    throw std::invalid_argument("tail_rank: no samples");
  }
  std::int64_t rank;
  if (direction == Direction::LowerIsBetter) {
    rank = (micro * static_cast<std::int64_t>(n) + kMicroFull - 1) / kMicroFull;
  } else {
    rank = (kMicroFull - micro) * static_cast<std::int64_t>(n) / kMicroFull + 1;
  }
  rank = std::clamp<std::int64_t>(rank, 1, static_cast<std::int64_t>(n));
  return static_cast<std::size_t>(rank);
}

}  // namespace iqb
