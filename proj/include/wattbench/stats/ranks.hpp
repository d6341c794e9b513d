#pragma once

#include <span>
#include <vector>

namespace wattbench::stats {

/// Midranks (average rank for ties, 1-based) of `values`, in input order.
std::vector<double> midranks(std::span<const double> values);

/// Sum over tie groups of (t^3 - t), the quantity used by tie corrections.
double tie_term(std::span<const double> values);

} // namespace wattbench::stats
