#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "guardrails/service/session.hpp"

namespace guardrails::service {

struct ServerOptions {
  std::string bind = "127.0.0.1:8765";
  SessionOptions session;
  std::size_t queue_capacity = 64;  // telemetry frames per connection, drop-oldest
  int threads = 2;
};

// Websocket server, one Session per connection.
class Server {
public:
  explicit Server(ServerOptions opts);
  ~Server();

  // Binds (throws std::runtime_error on failure) and returns the bound port.
  unsigned short listen();
  // Runs until stop(); blocks.
  void run();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace guardrails::service
