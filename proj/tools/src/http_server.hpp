#pragma once

#include <memory>
#include <string>
#include <thread>

#include "wifiscout/api.hpp"

namespace httplib {
class Server;
}

namespace wifiscout::http {

// Binds api::Service to an HTTP/1.1 listener. Requests run on the listener's
// worker threads; the store serializes writers.
class Server {
 public:
  explicit Server(const api::Service& service);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);

  // Blocks until stop().
  void listen();

  // Runs listen() on a background thread.
  void start();
  void stop();

 private:
  const api::Service& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace wifiscout::http
