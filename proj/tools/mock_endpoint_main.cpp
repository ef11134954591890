// Bundled mock chat-completions endpoint for offline runs and smoke tests.

#include <csignal>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "support/mock_server.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mock chat-completions endpoint"};
  fable::testing::MockEndpoint::Options options;
  app.add_option("--latency-ms", options.latency_ms, "per-request delay");
  app.add_option("--fail-first", options.fail_first, "respond 500 to the first N requests");
  app.add_option("--fail-every", options.fail_every, "respond 500 to every Nth request");
  app.add_flag("--omit-usage", options.omit_usage, "drop the usage block from replies");
  CLI11_PARSE(app, argc, argv);

  fable::testing::MockEndpoint server(options);
  server.start();
  std::cout << "listening on " << server.base_url() << std::endl;

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  server.stop();
  return 0;
}
