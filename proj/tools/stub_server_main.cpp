// Standalone stub REST backend, handy for trying live runs locally.

#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "wattbench/workload/stub_server.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
}

int main(int argc, char** argv) {
  CLI::App app{"Stub REST backend", "wattbench-stub"};
  int port = 8080;
  wattbench::workload::StubOptions options;
  app.add_option("--port", port, "Listen port (0 picks a free one)");
  app.add_option("--ready-after", options.ready_after_s, "Answer 503 for this many seconds");
  app.add_option("--latency-ms", options.latency_ms, "Added latency per request");
  app.add_option("--fail-every", options.fail_every, "Answer 500 on every n-th request");
  CLI11_PARSE(app, argc, argv);

  std::signal(SIGINT, [](int) { g_stop = 1; });
  std::signal(SIGTERM, [](int) { g_stop = 1; });

  wattbench::workload::StubServer server(options);
  server.start(port);
  std::cout << server.base_url() << std::endl;
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return 0;
}
