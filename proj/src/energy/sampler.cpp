#include "wattbench/energy/sampler.hpp"

#include "wattbench/common/error.hpp"

namespace wattbench::energy {

Sampler::Sampler(EnergySource& source, std::vector<Target> targets, std::chrono::nanoseconds period)
    : source_(source), targets_(std::move(targets)), period_(period) {}

Sampler::~Sampler() {
  if (worker_.joinable()) {
    worker_.request_stop();
    wake_.notify_all();
  }
}

void Sampler::take() {
  auto s = sample(source_, targets_);
  std::lock_guard lock(mutex_);
  if (!samples_.empty() && s.reading.timestamp_ns <= samples_.back().reading.timestamp_ns) return;
  samples_.push_back(std::move(s));
}

void Sampler::start() {
  if (running_) throw Error("sampler already running");
  samples_.clear();
  failure_ = nullptr;
  take();
  running_ = true;
  if (period_.count() > 0) {
    worker_ = std::jthread([this](std::stop_token stop) {
      std::unique_lock lock(mutex_);
      while (!stop.stop_requested()) {
        if (wake_.wait_for(lock, stop, period_, [] { return false; }); stop.stop_requested()) break;
        lock.unlock();
        try {
          take();
        } catch (...) {
          lock.lock();
          failure_ = std::current_exception();
          break;
        }
        lock.lock();
      }
    });
  }
}

std::vector<EnergySample> Sampler::stop() {
  if (!running_) throw Error("sampler not running");
  if (worker_.joinable()) {
    worker_.request_stop();
    wake_.notify_all();
    worker_.join();
  }
  running_ = false;
  if (failure_) std::rethrow_exception(failure_);
  take();
  std::lock_guard lock(mutex_);
  return std::move(samples_);
}

} // namespace wattbench::energy
