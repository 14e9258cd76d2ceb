#include "http_server.hpp"

#include <httplib.h>

#include <stdexcept>

namespace wifiscout::http {

Server::Server(const api::Service& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    api::Request request{req.method, req.path, {}, req.body};
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    const auto response = service_.handle(request);
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  };
  server_->Get(R"(/api/v1/.*)", dispatch);
  server_->Post(R"(/api/v1/.*)", dispatch);
  server_->Put(R"(/api/v1/.*)", dispatch);
  server_->Delete(R"(/api/v1/.*)", dispatch);
  server_->set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    res.status = 500;
    res.set_content(R"({"code":"internal","message":"internal error"})", "application/json");
  });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Server::listen() { server_->listen_after_bind(); }

void Server::start() {
  thread_ = std::thread([this] { listen(); });
  server_->wait_until_ready();
}

void Server::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace wifiscout::http
