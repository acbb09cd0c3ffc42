#pragma once

#include <memory>
#include <string>

#include "masader/api.hpp"

namespace masader {

// Serves an api::Service over HTTP/1.1.
class HttpServer {
 public:
  explicit HttpServer(const api::Service& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port; throws
  // ConfigError when the address cannot be bound.
  int bind(const std::string& host, int port);
  // Accept loop on a background thread.
  void start();
  // Blocks the calling thread in the accept loop.
  void listen();
  void stop();
  int port() const noexcept { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace masader
