#pragma once

#include <span>

namespace wattbench::stats {

/// Cliff's delta: (#{x > y} - #{x < y}) / (|a| |b|) over all cross pairs.
/// +1 means every value of `a` exceeds every value of `b`.
double cliffs_delta(std::span<const double> a, std::span<const double> b);

} // namespace wattbench::stats
