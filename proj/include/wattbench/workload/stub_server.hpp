#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>

#include "wattbench/workload/test_plan.hpp"

namespace httplib {
class Server;
}

namespace wattbench::workload {

/// In-process REST backend for tests and dry runs. POST answers 201 with
/// `{"id": n}`, GET 200 with the stored body (or `{}`), PUT and DELETE 204.
/// A request carrying `?expect=<text>` gets 409 unless the stored body for
/// that path equals `<text>`.
struct StubOptions {
  double ready_after_s = 0.0;        ///< 503 on every route until then
  std::string fail_path_substring;    ///< 500 for matching paths
  std::uint64_t fail_every = 0;       ///< 500 on every n-th request
  double latency_ms = 0.0;
  std::string health_path = "/health";
};

class StubServer {
public:
  explicit StubServer(StubOptions options = {});
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  /// Binds to 127.0.0.1 on `port` (0 picks a free one) and serves in a
  /// background thread.
  void start(int port = 0);
  void stop();

  int port() const { return port_; }
  std::string base_url() const;
  MethodCounts counts() const;
  std::uint64_t conflicts() const { return conflicts_.load(); }

private:
  struct State;
  StubOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<State> state_;
  std::thread thread_;
  int port_ = 0;
  std::array<std::atomic<std::uint64_t>, 4> counts_{};
  std::atomic<std::uint64_t> conflicts_{0};
};

} // namespace wattbench::workload
