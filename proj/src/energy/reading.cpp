#include "wattbench/energy/reading.hpp"

#include <algorithm>

#include "wattbench/common/error.hpp"

namespace wattbench::energy {

double delta_energy(const EnergyReading& prev, const EnergyReading& curr) {
  if (curr.timestamp_ns <= prev.timestamp_ns) {
    throw InvalidArgument("delta_energy: timestamps must strictly increase");
  }
  if (curr.max_range_uj != prev.max_range_uj) {
    throw InvalidArgument("delta_energy: readings come from different counters");
  }
  std::uint64_t delta_uj;
  if (curr.counter_uj >= prev.counter_uj) {
    delta_uj = curr.counter_uj - prev.counter_uj;
  } else {
    if (prev.counter_uj > curr.max_range_uj) {
      throw InvalidArgument("delta_energy: counter exceeds its max range");
    }
    delta_uj = (curr.max_range_uj - prev.counter_uj) + curr.counter_uj;
  }
  return static_cast<double>(delta_uj) * 1e-6;
}

std::map<TargetId, double> attribute_interval(const EnergySample& prev, const EnergySample& curr) {
  if (prev.target_cpu_ticks.size() != curr.target_cpu_ticks.size() ||
      !std::equal(prev.target_cpu_ticks.begin(), prev.target_cpu_ticks.end(), curr.target_cpu_ticks.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw InvalidArgument("attribute_interval: samples have different target sets");
  }
  const double system = delta_energy(prev.reading, curr.reading);
  const auto total_delta = curr.total_cpu_ticks > prev.total_cpu_ticks ? curr.total_cpu_ticks - prev.total_cpu_ticks : 0;

  std::map<TargetId, double> shares;
  double share_sum = 0.0;
  for (const auto& [id, ticks] : curr.target_cpu_ticks) {
    const auto before = prev.target_cpu_ticks.at(id);
    double share = 0.0;
    if (total_delta > 0 && ticks > before) {
      share = std::min(1.0, static_cast<double>(ticks - before) / static_cast<double>(total_delta));
    }
    shares[id] = share;
    share_sum += share;
  }
  // sampling skew between /proc reads can make the target shares overshoot
  const double normalizer = share_sum > 1.0 ? 1.0 / share_sum : 1.0;
  for (auto& [id, share] : shares) share = share * normalizer * system;
  return shares;
}

AttributionResult integrate_session(std::span<const EnergySample> samples) {
  if (samples.size() < 2) throw InvalidArgument("integrate_session: need at least 2 samples");
  AttributionResult result;
  for (const auto& [id, ticks] : samples.front().target_cpu_ticks) result.per_target_joules[id] = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    for (const auto& [id, joules] : attribute_interval(samples[i - 1], samples[i])) {
      result.per_target_joules[id] += joules;
    }
    result.system_joules += delta_energy(samples[i - 1].reading, samples[i].reading);
  }
  double attributed = 0.0;
  for (const auto& [id, joules] : result.per_target_joules) attributed += joules;
  result.coverage = result.system_joules > 0.0 ? std::clamp(attributed / result.system_joules, 0.0, 1.0) : 0.0;
  result.duration_s =
      static_cast<double>(samples.back().reading.timestamp_ns - samples.front().reading.timestamp_ns) * 1e-9;
  return result;
}

} // namespace wattbench::energy
