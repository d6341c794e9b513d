#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>
#include <vector>

#include "wattbench/energy/source.hpp"

namespace wattbench::energy {

/// Background sampling session. start() takes the opening sample on the
/// calling thread; with a positive period a worker thread then appends a
/// sample every period; stop() takes the closing sample and returns the
/// buffer. Samples whose timestamp does not advance are dropped so the
/// session always has strictly increasing timestamps.
class Sampler {
public:
  Sampler(EnergySource& source, std::vector<Target> targets, std::chrono::nanoseconds period);
  ~Sampler();

  Sampler(const Sampler&) = delete;
  Sampler& operator=(const Sampler&) = delete;

  void start();
  std::vector<EnergySample> stop();
  bool running() const noexcept { return running_; }

private:
  void take();

  EnergySource& source_;
  std::vector<Target> targets_;
  std::chrono::nanoseconds period_;
  std::mutex mutex_;
  std::condition_variable_any wake_;
  std::vector<EnergySample> samples_;
  std::jthread worker_;
  std::exception_ptr failure_;
  bool running_ = false;
};

} // namespace wattbench::energy
