#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wifiscout/config.hpp"
#include "wifiscout/error.hpp"
#include "wifiscout/store.hpp"

namespace wifiscout::api {

// Transport-neutral request; the HTTP binding fills it from the wire.
struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ApiError {
  int http_status = 500;
  // One of: validation_failed, unknown_user, unknown_ap, duplicate_user,
  // invalid_bbox, stale_timestamp, malformed_body, unsupported_version,
  // internal.
  std::string code;
  std::string message;
  std::vector<std::string> details;
};

// Folds a platform error onto the closed wire code set.
ApiError to_api_error(const Error& error);

std::string error_body(const ApiError& error);

using Clock = std::function<Timestamp()>;

Timestamp system_clock_seconds();

// Routes:
//   POST /api/v1/users        register; 201 + reward event
//   POST /api/v1/reviews      submit;   201 + reward event
//   GET  /api/v1/aps          ?bbox=&min_rating=
//   GET  /api/v1/clusters     ?bbox=&zoom=     (no zoom: configured radius)
//   GET  /api/v1/leaderboard  ?n=              (default 10)
//   GET  /api/v1/ownership    ?bbox=           (no bbox: every AP)
//   GET  /api/v1/snapshot     ?bbox=           application/octet-stream
//
// bbox wire form: min_lat,min_lon,max_lat,max_lon. Bodies and responses are
// JSON with sorted keys. No authentication: user_id in a body is trusted.
class Service {
 public:
  Service(AdvisoryStore& store, ServiceConfig config, Clock clock = system_clock_seconds);

  // Never throws; every failure becomes an error response.
  Response handle(const Request& request) const;

 private:
  // These throw Error; handle() turns it into the response.
  Response register_user(const std::string& body) const;
  Response submit_review(const std::string& body) const;
  Response region_query(const std::map<std::string, std::string>& query) const;
  Response clusters(const std::map<std::string, std::string>& query) const;
  Response leaderboard(const std::map<std::string, std::string>& query) const;
  Response ownership(const std::map<std::string, std::string>& query) const;
  Response snapshot(const std::map<std::string, std::string>& query) const;

  // The time a server-stamped event gets: now, but never before the log head.
  Timestamp stamp() const;

  AdvisoryStore& store_;
  ServiceConfig config_;
  Clock clock_;
};

}  // namespace wifiscout::api
