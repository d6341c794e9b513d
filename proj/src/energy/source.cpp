#include "wattbench/energy/source.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "wattbench/common/error.hpp"

namespace wattbench::energy {

namespace {

std::uint64_t read_u64(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SourceUnavailable(path.string(), std::strerror(errno));
  std::uint64_t value = 0;
  if (!(in >> value)) throw SourceUnavailable(path.string(), "not an unsigned integer");
  return value;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace

// ---------------------------------------------------------------- RAPL

RaplSysfsCounter::RaplSysfsCounter(std::vector<std::filesystem::path> energy_files, Clock& clock) : clock_(clock) {
  if (energy_files.empty()) throw ConfigError("rapl-sysfs source needs at least one counter path");
  for (auto& path : energy_files) {
    Domain d;
    d.max_range = read_u64(path.parent_path() / "max_energy_range_uj");
    if (d.max_range == 0) throw SourceUnavailable(path.string(), "max_energy_range_uj is zero");
    d.path = std::move(path);
    combined_range_ += d.max_range;
    domains_.push_back(std::move(d));
  }
}

EnergyReading RaplSysfsCounter::read() {
  std::uint64_t advance = 0;
  std::uint64_t raw_sum = 0;
  for (auto& d : domains_) {
    const auto raw = read_u64(d.path);
    if (primed_) advance += raw >= d.last ? raw - d.last : (d.max_range - d.last) + raw;
    raw_sum += raw;
    d.last = raw;
  }
  if (!primed_) {
    combined_ = raw_sum % combined_range_;
    primed_ = true;
  } else {
    combined_ = (combined_ + advance) % combined_range_;
  }
  return {combined_, combined_range_, clock_.now_ns()};
}

// ---------------------------------------------------------------- simulated counter

SimulatedCounter::SimulatedCounter(double power_w, Clock& clock, std::uint64_t max_range_uj)
    : power_w_(power_w), clock_(clock), start_ns_(clock.now_ns()), max_range_(max_range_uj) {
  if (!(power_w >= 0.0)) throw ConfigError("simulated power must be non-negative");
  if (max_range_uj == 0) throw ConfigError("simulated max range must be positive");
}

EnergyReading SimulatedCounter::read() {
  const auto now = clock_.now_ns();
  // W * ns = 1e-3 uJ
  const long double energy_uj = static_cast<long double>(power_w_) * static_cast<long double>(now - start_ns_) * 1e-3L;
  const auto counter = static_cast<std::uint64_t>(std::llround(energy_uj)) % max_range_;
  return {counter, max_range_, now};
}

// ---------------------------------------------------------------- procfs accounting

namespace {

struct ProcStat {
  int ppid = 0;
  std::uint64_t own = 0;      // utime + stime
  std::uint64_t children = 0; // cutime + cstime
};

std::optional<ProcStat> read_proc_stat(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  std::string line;
  std::getline(in, line);
  // comm may contain spaces and parentheses; fields resume after the last ')'
  const auto close = line.rfind(')');
  if (close == std::string::npos) return std::nullopt;
  std::istringstream rest(line.substr(close + 1));
  std::string state;
  ProcStat s;
  rest >> state >> s.ppid;
  std::string skip;
  for (int i = 0; i < 9; ++i) rest >> skip; // pgrp session tty_nr tpgid flags minflt cminflt majflt cmajflt
  std::uint64_t utime = 0, stime = 0;
  std::int64_t cutime = 0, cstime = 0;
  if (!(rest >> utime >> stime >> cutime >> cstime)) return std::nullopt;
  s.own = utime + stime;
  s.children = static_cast<std::uint64_t>(std::max<std::int64_t>(0, cutime + cstime));
  return s;
}

} // namespace

ProcCpuAccounting::ProcCpuAccounting(std::filesystem::path proc_root) : root_(std::move(proc_root)) {}

CpuSnapshot ProcCpuAccounting::read(std::span<const Target> targets) {
  CpuSnapshot snap;
  {
    const auto path = root_ / "stat";
    std::ifstream in(path);
    if (!in) throw SourceUnavailable(path.string(), std::strerror(errno));
    std::string label;
    in >> label;
    if (label != "cpu") throw SourceUnavailable(path.string(), "missing aggregate cpu line");
    std::uint64_t user = 0, nice = 0, system = 0, idle = 0, iowait = 0, irq = 0, softirq = 0, steal = 0;
    in >> user >> nice >> system >> idle >> iowait >> irq >> softirq >> steal;
    snap.total_ticks = user + nice + system + irq + softirq + steal;
  }
  if (targets.empty()) return snap;

  // parent -> children over every live process, for tree sums
  std::map<int, ProcStat> procs;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(root_, ec)) {
    const auto name = entry.path().filename().string();
    if (name.empty() || name.find_first_not_of("0123456789") != std::string::npos) continue;
    if (auto s = read_proc_stat(entry.path() / "stat")) procs[std::stoi(name)] = *s;
  }
  std::multimap<int, int> children;
  for (const auto& [pid, s] : procs) children.emplace(s.ppid, pid);

  for (const auto& target : targets) {
    auto& last = last_[target.id];
    auto it = procs.find(target.pid);
    if (dead_.count(target.id) != 0 || it == procs.end()) {
      dead_.insert(target.id);
      snap.dead.insert(target.id);
      snap.target_ticks[target.id] = last;
      continue;
    }
    std::uint64_t ticks = it->second.own + it->second.children;
    std::vector<int> stack;
    for (auto [b, e] = children.equal_range(target.pid); b != e; ++b) stack.push_back(b->second);
    while (!stack.empty()) {
      const int pid = stack.back();
      stack.pop_back();
      ticks += procs[pid].own;
      for (auto [b, e] = children.equal_range(pid); b != e; ++b) stack.push_back(b->second);
    }
    // descendants that exit unreaped take their ticks with them
    last = std::max(last, ticks);
    snap.target_ticks[target.id] = last;
  }
  return snap;
}

// ---------------------------------------------------------------- simulated accounting

SimulatedCpuAccounting::SimulatedCpuAccounting(Clock& clock, unsigned cpus)
    : clock_(clock), cpus_(cpus), start_ns_(clock.now_ns()) {
  if (cpus == 0) throw ConfigError("simulated host needs at least one CPU");
}

void SimulatedCpuAccounting::set_profile(const TargetId& id, Profile profile) {
  for (const auto& s : profile.segments) {
    if (!(s.share >= 0.0 && s.share <= 1.0)) throw ConfigError("simulated CPU share must lie in [0, 1]");
  }
  profiles_[id] = std::move(profile);
}

long double SimulatedCpuAccounting::busy_ticks(const Profile& profile, std::int64_t until_ns) const {
  if (profile.exit_ns) until_ns = std::min(until_ns, *profile.exit_ns);
  long double ticks = 0.0L;
  for (std::size_t i = 0; i < profile.segments.size(); ++i) {
    const auto from = profile.segments[i].from_ns;
    const auto to = i + 1 < profile.segments.size() ? profile.segments[i + 1].from_ns : until_ns;
    const auto end = std::min(to, until_ns);
    if (end > from) ticks += static_cast<long double>(end - from) * cpus_ * profile.segments[i].share;
  }
  return ticks;
}

CpuSnapshot SimulatedCpuAccounting::read(std::span<const Target> targets) {
  const auto elapsed = clock_.now_ns() - start_ns_;
  CpuSnapshot snap;
  snap.total_ticks = static_cast<std::uint64_t>(elapsed) * cpus_;
  for (const auto& t : targets) {
    auto it = profiles_.find(t.id);
    if (it == profiles_.end()) {
      snap.target_ticks[t.id] = 0;
      continue;
    }
    snap.target_ticks[t.id] = static_cast<std::uint64_t>(std::llround(busy_ticks(it->second, elapsed)));
    if (it->second.exit_ns && elapsed >= *it->second.exit_ns) snap.dead.insert(t.id);
  }
  return snap;
}

// ---------------------------------------------------------------- factory

double seeded_normal(std::uint64_t seed, const std::string& config_id, int iteration, std::uint64_t stream) {
  const auto h = fnv1a(config_id);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(iteration), static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

double simulated_power(const SimulatedPower& params, const std::string& config_id, int iteration) {
  double power = params.base_power_w;
  if (auto it = params.power_offsets_w.find(config_id); it != params.power_offsets_w.end()) power += it->second;
  if (auto it = params.power_scale.find(config_id); it != params.power_scale.end()) power *= it->second;
  if (params.noise > 0.0) power *= 1.0 + params.noise * seeded_normal(params.seed, config_id, iteration, 0);
  return std::max(power, 0.0);
}

EnergySource open_source(const EnergySourceDescriptor& descriptor, Clock& clock, const std::string& config_id,
                         int iteration) {
  EnergySource source;
  if (descriptor.kind == SourceKind::rapl_sysfs) {
    source.counter = std::make_unique<RaplSysfsCounter>(descriptor.counter_paths, clock);
    source.cpu = std::make_unique<ProcCpuAccounting>(descriptor.proc_root);
  } else {
    const auto& sim = descriptor.simulated;
    source.counter =
        std::make_unique<SimulatedCounter>(simulated_power(sim, config_id, iteration), clock, sim.max_range_uj);
    auto cpu = std::make_unique<SimulatedCpuAccounting>(clock, sim.cpus);
    cpu->set_share("app", sim.app_share);
    source.cpu = std::move(cpu);
  }
  return source;
}

void check_available(const EnergySourceDescriptor& descriptor) {
  if (descriptor.kind != SourceKind::rapl_sysfs) return;
  SteadyClock clock;
  auto source = open_source(descriptor, clock);
  source.counter->read();
  source.cpu->read({});
}

EnergyReading read_system_energy(EnergySource& source) { return source.counter->read(); }

EnergySample sample(EnergySource& source, std::span<const Target> targets) {
  EnergySample s;
  auto cpu = source.cpu->read(targets);
  s.reading = source.counter->read();
  s.target_cpu_ticks = std::move(cpu.target_ticks);
  s.dead_targets = std::move(cpu.dead);
  s.total_cpu_ticks = cpu.total_ticks;
  return s;
}

} // namespace wattbench::energy
