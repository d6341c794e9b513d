#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace wattbench::energy {

/// Monotonic time source shared by energy readings and the sampler.
class Clock {
public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ns() = 0;
};

class SteadyClock final : public Clock {
public:
  std::int64_t now_ns() override {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
  }
};

/// Manually advanced clock for simulations and tests.
class VirtualClock final : public Clock {
public:
  explicit VirtualClock(std::int64_t start_ns = 0) : now_(start_ns) {}

  std::int64_t now_ns() override { return now_.load(); }
  void advance_ns(std::int64_t delta) { now_ += delta; }
  void advance_s(double seconds) { now_ += static_cast<std::int64_t>(seconds * 1e9); }
  void set_ns(std::int64_t t) { now_ = t; }

private:
  std::atomic<std::int64_t> now_;
};

} // namespace wattbench::energy
