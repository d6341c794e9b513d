#include "wattbench/workload/stub_server.hpp"

#include <chrono>
#include <mutex>
#include <unordered_map>

#include <httplib.h>

#include "wattbench/common/error.hpp"

namespace wattbench::workload {

struct StubServer::State {
  std::mutex mutex;
  std::unordered_map<std::string, std::string> bodies;
  std::uint64_t next_id = 1;
  std::atomic<std::uint64_t> requests{0};
  std::chrono::steady_clock::time_point started;
};

StubServer::StubServer(StubOptions options) : options_(std::move(options)), state_(std::make_unique<State>()) {}

StubServer::~StubServer() { stop(); }

std::string StubServer::base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

MethodCounts StubServer::counts() const {
  MethodCounts out;
  for (std::size_t i = 0; i < 4; ++i) out.by_method[i] = counts_[i].load();
  return out;
}

void StubServer::start(int port) {
  if (server_) throw InvalidArgument("stub server already started");
  server_ = std::make_unique<httplib::Server>();
  server_->set_tcp_nodelay(true);
  state_->started = std::chrono::steady_clock::now();

  auto handler = [this](HttpMethod method) {
    return [this, method](const httplib::Request& req, httplib::Response& res) {
      counts_[static_cast<std::size_t>(method)].fetch_add(1);
      const auto n = state_->requests.fetch_add(1) + 1;
      if (options_.latency_ms > 0) {
        std::this_thread::sleep_for(std::chrono::microseconds(static_cast<std::int64_t>(options_.latency_ms * 1000)));
      }
      const double up = std::chrono::duration<double>(std::chrono::steady_clock::now() - state_->started).count();
      if (up < options_.ready_after_s) {
        res.status = 503;
        return;
      }
      if (req.path == options_.health_path) {
        res.status = 200;
        res.set_content("{\"status\":\"UP\"}", "application/json");
        return;
      }
      if ((!options_.fail_path_substring.empty() && req.path.find(options_.fail_path_substring) != std::string::npos) ||
          (options_.fail_every > 0 && n % options_.fail_every == 0)) {
        res.status = 500;
        return;
      }

      std::lock_guard lock(state_->mutex);
      if (req.has_param("expect")) {
        auto it = state_->bodies.find(req.path);
        if (it == state_->bodies.end() || it->second != req.get_param_value("expect")) {
          conflicts_.fetch_add(1);
          res.status = 409;
          return;
        }
      }
      switch (method) {
      case HttpMethod::post: {
        const auto id = state_->next_id++;
        state_->bodies[req.path + "/" + std::to_string(id)] = req.body;
        res.status = 201;
        res.set_content("{\"id\":" + std::to_string(id) + "}", "application/json");
        break;
      }
      case HttpMethod::get: {
        auto it = state_->bodies.find(req.path);
        res.status = 200;
        res.set_content(it == state_->bodies.end() ? "{}" : it->second, "application/json");
        break;
      }
      case HttpMethod::put:
        state_->bodies[req.path] = req.body;
        res.status = 204;
        break;
      case HttpMethod::del:
        state_->bodies.erase(req.path);
        res.status = 204;
        break;
      }
    };
  };

  const std::string any = R"(/.*)";
  server_->Get(any, handler(HttpMethod::get));
  server_->Post(any, handler(HttpMethod::post));
  server_->Put(any, handler(HttpMethod::put));
  server_->Delete(any, handler(HttpMethod::del));

  port_ = port == 0 ? server_->bind_to_any_port("127.0.0.1") : (server_->bind_to_port("127.0.0.1", port) ? port : -1);
  if (port_ <= 0) {
    server_.reset();
    throw IoError("stub server could not bind");
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void StubServer::stop() {
  if (!server_) return;
  server_->stop();
  if (thread_.joinable()) thread_.join();
  server_.reset();
}

} // namespace wattbench::workload
