#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wattbench/energy/clock.hpp"
#include "wattbench/energy/reading.hpp"

namespace wattbench::energy {

enum class SourceKind { rapl_sysfs, simulated };

/// Parameters of the simulated source. Per-run power is
/// (base_power_w + power_offsets_w[config]) * power_scale[config]
/// * (1 + noise * z) with z a standard normal draw seeded by
/// (seed, config id, iteration).
struct SimulatedPower {
  double base_power_w = 10.0;
  std::map<std::string, double> power_offsets_w; ///< keyed by config id
  std::map<std::string, double> power_scale;     ///< keyed by config id
  double noise = 0.0;
  std::uint64_t seed = 0;
  double app_share = 1.0; ///< CPU share of the simulated application
  unsigned cpus = 4;
  std::uint64_t max_range_uj = 262143328850ULL;
};

struct EnergySourceDescriptor {
  SourceKind kind = SourceKind::simulated;
  std::vector<std::filesystem::path> counter_paths; ///< rapl-sysfs energy_uj files
  std::filesystem::path proc_root = "/proc";
  SimulatedPower simulated;
};

/// A process tree to attribute energy to. `pid` is ignored by simulated
/// accounting.
struct Target {
  TargetId id;
  int pid = 0;
};

class EnergyCounter {
public:
  virtual ~EnergyCounter() = default;
  virtual EnergyReading read() = 0;
};

struct CpuSnapshot {
  std::map<TargetId, std::uint64_t> target_ticks;
  std::set<TargetId> dead;
  std::uint64_t total_ticks = 0;
};

class CpuAccounting {
public:
  virtual ~CpuAccounting() = default;
  virtual CpuSnapshot read(std::span<const Target> targets) = 0;
};

/// Sums one or more powercap `energy_uj` counters. Each file is unwrapped
/// individually against its sibling `max_energy_range_uj`; the combined
/// counter wraps modulo the sum of the ranges.
class RaplSysfsCounter final : public EnergyCounter {
public:
  RaplSysfsCounter(std::vector<std::filesystem::path> energy_files, Clock& clock);
  EnergyReading read() override;

private:
  struct Domain {
    std::filesystem::path path;
    std::uint64_t max_range = 0;
    std::uint64_t last = 0;
  };
  std::vector<Domain> domains_;
  Clock& clock_;
  std::uint64_t combined_range_ = 0;
  std::uint64_t combined_ = 0;
  bool primed_ = false;
};

/// Constant-power counter driven by a clock: counter = power * elapsed.
class SimulatedCounter final : public EnergyCounter {
public:
  SimulatedCounter(double power_w, Clock& clock, std::uint64_t max_range_uj = SimulatedPower{}.max_range_uj);
  EnergyReading read() override;
  double power_w() const noexcept { return power_w_; }

private:
  double power_w_;
  Clock& clock_;
  std::int64_t start_ns_;
  std::uint64_t max_range_;
};

/// Process-tree CPU ticks from procfs: utime + stime of the target and all
/// live descendants plus the target's reaped-children times. Host total is
/// the busy time of the aggregate `cpu` line of <root>/stat.
class ProcCpuAccounting final : public CpuAccounting {
public:
  explicit ProcCpuAccounting(std::filesystem::path proc_root = "/proc");
  CpuSnapshot read(std::span<const Target> targets) override;

private:
  std::filesystem::path root_;
  std::map<TargetId, std::uint64_t> last_;
  std::set<TargetId> dead_;
};

/// Deterministic accounting: the host accrues `cpus` CPU-nanoseconds per
/// nanosecond; each target takes a piecewise-constant share of it.
class SimulatedCpuAccounting final : public CpuAccounting {
public:
  struct Segment {
    std::int64_t from_ns; ///< relative to construction time
    double share;
  };
  struct Profile {
    std::vector<Segment> segments; ///< sorted by from_ns
    std::optional<std::int64_t> exit_ns;
  };

  SimulatedCpuAccounting(Clock& clock, unsigned cpus);
  void set_profile(const TargetId& id, Profile profile);
  void set_share(const TargetId& id, double share) { set_profile(id, {{{0, share}}, std::nullopt}); }
  CpuSnapshot read(std::span<const Target> targets) override;

private:
  long double busy_ticks(const Profile& profile, std::int64_t until_ns) const;

  Clock& clock_;
  unsigned cpus_;
  std::int64_t start_ns_;
  std::map<TargetId, Profile> profiles_;
};

/// Energy counter plus CPU accounting.
struct EnergySource {
  std::unique_ptr<EnergyCounter> counter;
  std::unique_ptr<CpuAccounting> cpu;
};

/// Power drawn by the simulated stack for one run.
double simulated_power(const SimulatedPower& params, const std::string& config_id, int iteration);

/// Standard normal draw seeded by (seed, config id, iteration, stream).
double seeded_normal(std::uint64_t seed, const std::string& config_id, int iteration, std::uint64_t stream);

/// Builds the source for one run. Throws SourceUnavailable when a counter
/// file cannot be read.
EnergySource open_source(const EnergySourceDescriptor& descriptor, Clock& clock, const std::string& config_id = {},
                         int iteration = 0);

/// Verifies that the source can be read at all (used before a campaign).
void check_available(const EnergySourceDescriptor& descriptor);

EnergyReading read_system_energy(EnergySource& source);

/// One snapshot of energy and CPU accounting, taken back to back.
EnergySample sample(EnergySource& source, std::span<const Target> targets);

} // namespace wattbench::energy
