// SPDX-License-Identifier: Apache-2.0
#include "robotid/cli/server.hpp"

#include <stdexcept>

#include "httplib.h"

namespace robotid::cli {

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

std::optional<std::int64_t> token_of(const nlohmann::json& body) {
  if (!body.contains("token")) return std::nullopt;
  return body.at("token").get<std::int64_t>();
}

nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  nlohmann::json body = nlohmann::json::parse(req.body);
  if (!body.is_object()) throw SessionError(400, "request body must be a JSON object");
  return body;
}

}  // namespace

SessionServer::SessionServer(Session session, std::string static_dir)
    : session_(std::move(session)), static_dir_(std::move(static_dir)),
      server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

SessionServer::~SessionServer() { stop(); }

void SessionServer::install_routes() {
  auto guarded = [this](auto&& body) {
    return [this, body](const httplib::Request& req, httplib::Response& res) {
      try {
        std::lock_guard lock(mutex_);
        reply(res, 200, body(req));
      } catch (const SessionError& e) {
        reply(res, e.status, {{"error", e.what()}});
      } catch (const nlohmann::json::exception& e) {
        reply(res, 400, {{"error", std::string("bad request: ") + e.what()}});
      }
    };
  };
  server_->Get("/session/next-frame", guarded([this](const httplib::Request&) { return session_.next_frame(); }));
  server_->Post("/session/choice", guarded([this](const httplib::Request& req) {
                  const nlohmann::json body = parse_body(req);
                  if (!body.contains("slot") || !body.contains("class")) {
                    throw SessionError(400, "slot and class are required");
                  }
                  session_.choose(body.at("slot").get<int>(), body.at("class").get<int>(), token_of(body));
                  return nlohmann::json{{"ok", true}, {"token", session_.token()}};
                }));
  server_->Post("/session/advance", guarded([this](const httplib::Request& req) {
                  return session_.advance(token_of(parse_body(req)));
                }));
  server_->Get("/session/report", guarded([this](const httplib::Request&) { return session_.report(); }));
  if (!static_dir_.empty() && !server_->set_mount_point("/", static_dir_)) {
    throw std::runtime_error("cannot serve static files from " + static_dir_);
  }
}

int SessionServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void SessionServer::listen() { server_->listen_after_bind(); }

void SessionServer::stop() {
  if (server_) server_->stop();
}

nlohmann::json SessionServer::report() {
  std::lock_guard lock(mutex_);
  return session_.report();
}

}  // namespace robotid::cli
