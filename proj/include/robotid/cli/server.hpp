// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "robotid/cli/session.hpp"

namespace httplib {
class Server;
}

namespace robotid::cli {

/// HTTP front end of a Session:
///   GET  /session/next-frame
///   POST /session/choice   {"slot": k, "class": c[, "token": t]}
///   POST /session/advance  [{"token": t}]
///   GET  /session/report
/// Requests are serialized; one session per server.
class SessionServer {
 public:
  explicit SessionServer(Session session, std::string static_dir = {});
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  /// Binds the socket; port 0 picks a free port. Returns the bound port.
  /// Throws std::runtime_error when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires bind().
  void listen();
  void stop();

  /// Copy of the current report, taken under the session lock.
  [[nodiscard]] nlohmann::json report();

 private:
  void install_routes();

  std::mutex mutex_;
  Session session_;
  std::string static_dir_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace robotid::cli
