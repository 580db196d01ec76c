#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "httplib.h"
#include "metaland/service/api.hpp"

namespace metaland {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "http://localhost:5173";
};

/// HTTP front end over an ApiIndex. The served index is swapped atomically by
/// `publish`; in-flight requests keep the index they started with.
class ApiServer {
 public:
  ApiServer(std::shared_ptr<const Snapshot> snapshot, ServerOptions options) : options_(std::move(options)) {
    publish(std::move(snapshot));
    auto cors = [this](httplib::Response& res) {
      if (!options_.cors_origin.empty()) {
        res.set_header("Access-Control-Allow-Origin", options_.cors_origin);
        res.set_header("Vary", "Origin");
      }
    };
    server_.Get(R"(/.*)", [this, cors](const httplib::Request& req, httplib::Response& res) {
      QueryParams query;
      for (const auto& [k, v] : req.params) query.emplace(k, v);
      const ApiResponse r = current()->handle(req.path, query);
      res.status = r.status;
      res.set_content(r.body, r.content_type);
      cors(res);
    });
    server_.Options(R"(/.*)", [this, cors](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
      cors(res);
      res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    auto not_allowed = [cors](const httplib::Request&, httplib::Response& res) {
      res.status = 405;
      res.set_header("Allow", "GET, OPTIONS");
      res.set_content(R"({"error":{"message":"read-only service","status":405}})", "application/json");
      cors(res);
    };
    server_.Post(R"(/.*)", not_allowed);
    server_.Put(R"(/.*)", not_allowed);
    server_.Patch(R"(/.*)", not_allowed);
    server_.Delete(R"(/.*)", not_allowed);
  }

  ~ApiServer() { stop(); }
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  void publish(std::shared_ptr<const Snapshot> snapshot) {
    auto index = std::make_shared<const ApiIndex>(std::move(snapshot));
    std::lock_guard lock(mu_);
    index_ = std::move(index);
  }

  std::shared_ptr<const ApiIndex> current() const {
    std::lock_guard lock(mu_);
    return index_;
  }

  /// Binds and serves on a background thread; returns the bound port.
  int start() {
    if (!bind()) throw Error("cannot bind " + options_.host + ":" + std::to_string(options_.port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  /// Binds and serves on the calling thread until stop().
  void listen() {
    if (!bind()) throw Error("cannot bind " + options_.host + ":" + std::to_string(options_.port));
    server_.listen_after_bind();
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const { return port_; }

 private:
  bool bind() {
    if (options_.port == 0) {
      port_ = server_.bind_to_any_port(options_.host);
      return port_ > 0;
    }
    port_ = options_.port;
    return server_.bind_to_port(options_.host, options_.port);
  }

  ServerOptions options_;
  httplib::Server server_;
  mutable std::mutex mu_;
  std::shared_ptr<const ApiIndex> index_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace metaland
