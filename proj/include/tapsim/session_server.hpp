#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "tapsim/config.hpp"

namespace tapsim::io {

struct ServerOptions {
  std::string bind_address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  std::filesystem::path static_root;  // served over plain HTTP GET when set
  int threads = 1;
};

/// WebSocket endpoint for live sessions. Each connection owns a LiveSession
/// driven by a timer at the control rate; inbound text frames carry
/// newline-delimited FingerSample messages, outbound frames carry one
/// message each. Non-upgrade HTTP requests are answered from static_root.
class SessionServer {
 public:
  /// Binds immediately; throws std::runtime_error when the port is taken.
  SessionServer(AppConfig config, ServerOptions options);
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  [[nodiscard]] unsigned short port() const;

  /// Serves until stop() is called from another thread.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tapsim::io
