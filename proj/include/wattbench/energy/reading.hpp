#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>

namespace wattbench::energy {

using TargetId = std::string;

/// Snapshot of a cumulative energy counter. The counter wraps modulo
/// `max_range_uj`.
struct EnergyReading {
  std::uint64_t counter_uj = 0;
  std::uint64_t max_range_uj = 0;
  std::int64_t timestamp_ns = 0; ///< monotonic
};

/// One coherent snapshot: energy plus cumulative CPU ticks of every target
/// process tree and of the whole host.
struct EnergySample {
  EnergyReading reading;
  std::map<TargetId, std::uint64_t> target_cpu_ticks;
  std::set<TargetId> dead_targets; ///< vanished; their ticks are frozen
  std::uint64_t total_cpu_ticks = 0;
};

struct AttributionResult {
  std::map<TargetId, double> per_target_joules;
  double system_joules = 0.0;
  double coverage = 0.0; ///< attributed / system energy, 0 when no energy
  double duration_s = 0.0;
};

/// Joules between two readings of the same counter, assuming at most one
/// wrap: (max_range - prev) + curr when the counter went backwards.
double delta_energy(const EnergyReading& prev, const EnergyReading& curr);

/// Per-target share of the interval's system energy:
/// joules = (d target_ticks / d total_ticks) * delta_energy. Zero for every
/// target when the host accrued no CPU time. Ratios are clamped so the
/// targets never receive more than the system energy.
std::map<TargetId, double> attribute_interval(const EnergySample& prev, const EnergySample& curr);

/// Sums attribute_interval and delta_energy over consecutive samples.
AttributionResult integrate_session(std::span<const EnergySample> samples);

} // namespace wattbench::energy
