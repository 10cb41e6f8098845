#pragma once

#include <cstdint>
#include <span>

#include "iqb/types.hpp"

namespace iqb {

// Percentiles are quantized to micro-percentile units so rank computation is
// exact 64-bit integer arithmetic; ceil(p/100*n) in floating point misranks
// near integer products (e.g. p=55, n=20).
std::int64_t to_micro_percentile(double p);

// 1-based nearest rank: smallest k with k >= p/100 * n.
std::size_t nearest_rank(std::size_t n, double p);

// The ceil(p/100*n)-th smallest element; always a member of `values`.
// Requires p in (0,100] and non-empty, all-finite input. Throws
// std::invalid_argument ("no samples", or naming the offending index).
double nearest_rank_percentile(std::span<const double> values, double p);

// Orients the percentile so "at least p% of samples meet the threshold" has
// uniform semantics: p for lower_is_better metrics, 100-p for
// higher_is_better. Requires p in (0,100).
double tail_percentile_for(Metric metric, double p);

// 1-based rank of the tail statistic that makes
//   aggregate meets threshold  <=>  at least p% of samples meet it
// exact for both directions:
//   lower_is_better:  ceil(n*p/100)
//   higher_is_better: floor(n*(100-p)/100) + 1
// (The two differ from a plain nearest rank at 100-p only when
// n*(100-p)/100 is an integer.)
std::size_t tail_rank(std::size_t n, double p, Direction direction);

}  // namespace iqb
