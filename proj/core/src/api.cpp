#include "wifiscout/api.hpp"

#include <chrono>

#include "json_codec.hpp"
#include "numfmt.hpp"
#include "wifiscout/ingest.hpp"
#include "wifiscout/snapshot.hpp"
#include "wifiscout/spatial.hpp"

namespace wifiscout::api {

namespace {

using codec::json;
using Query = std::map<std::string, std::string>;

constexpr std::size_t kDefaultLeaderboardSize = 10;

json parse_body(const std::string& body) {
  try {
    auto j = json::parse(body);
    if (!j.is_object()) throw Error(ErrorCode::kMalformedBody, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedBody, std::string("request body is not valid JSON: ") + e.what());
  }
}

const json* member(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::string required_string(const json& j, const char* key) {
  const auto* v = member(j, key);
  if (v == nullptr || !v->is_string()) {
    throw Error(ErrorCode::kMalformedBody, std::string("field '") + key + "' must be a string");
  }
  return v->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (member(j, key) == nullptr) return std::nullopt;
  return required_string(j, key);
}

std::optional<std::int64_t> optional_integer(const json& j, const char* key) {
  const auto* v = member(j, key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_number_integer()) {
    throw Error(ErrorCode::kMalformedBody, std::string("field '") + key + "' must be an integer");
  }
  return v->get<std::int64_t>();
}

std::optional<Bbox> query_bbox(const Query& query) {
  const auto it = query.find("bbox");
  if (it == query.end()) return std::nullopt;
  return parse_bbox(it->second);
}

Bbox required_bbox(const Query& query) {
  auto bbox = query_bbox(query);
  if (!bbox) throw Error(ErrorCode::kInvalidBbox, "query parameter 'bbox' is required");
  return *bbox;
}

Response json_response(int status, const json& body) { return {status, "application/json", body.dump()}; }

std::string canonical_ap_id(const std::string& raw) {
  if (raw.starts_with(kExternalIdPrefix)) return raw;
  return canonicalize_bssid(raw);
}

}  // namespace

ApiError to_api_error(const Error& error) {
  ApiError out;
  out.message = error.what();
  out.details = error.details();
  switch (error.code()) {
    case ErrorCode::kValidationFailed:
    case ErrorCode::kMalformedBssid:
      out.http_status = 400;
      out.code = "validation_failed";
      break;
    case ErrorCode::kUnknownUser:
      out.http_status = 404;
      out.code = "unknown_user";
      break;
    case ErrorCode::kUnknownAp:
      out.http_status = 404;
      out.code = "unknown_ap";
      break;
    case ErrorCode::kDuplicateUser:
      out.http_status = 409;
      out.code = "duplicate_user";
      break;
    case ErrorCode::kInvalidBbox:
      out.http_status = 400;
      out.code = "invalid_bbox";
      break;
    case ErrorCode::kStaleTimestamp:
    case ErrorCode::kNonMonotonicTimestamp:
      out.http_status = 409;
      out.code = "stale_timestamp";
      break;
    case ErrorCode::kMalformedBody:
    case ErrorCode::kMalformedHeader:
    case ErrorCode::kMalformedSnapshot:
      out.http_status = 400;
      out.code = "malformed_body";
      break;
    case ErrorCode::kUnsupportedVersion:
      out.http_status = 400;
      out.code = "unsupported_version";
      break;
    case ErrorCode::kCorruptLog:
    case ErrorCode::kStorageFailure:
    case ErrorCode::kInternal:
      out.http_status = 500;
      out.code = "internal";
      out.message = "internal error";
      out.details.clear();
      break;
  }
  return out;
}

std::string error_body(const ApiError& error) {
  json j{{"code", error.code}, {"message", error.message}};
  if (!error.details.empty()) j["details"] = error.details;
  return j.dump();
}

Timestamp system_clock_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Service::Service(AdvisoryStore& store, ServiceConfig config, Clock clock)
    : store_(store), config_(std::move(config)), clock_(std::move(clock)) {}

Timestamp Service::stamp() const {
  const auto head = store_.read([](const PlatformState& s) { return s.last_at(); });
  return std::max(clock_(), head);
}

Response Service::handle(const Request& request) const {
  struct Route {
    const char* method;
    const char* path;
    Response (Service::*body_handler)(const std::string&) const;
    Response (Service::*query_handler)(const Query&) const;
  };
  static const Route kRoutes[] = {
      {"POST", "/api/v1/users", &Service::register_user, nullptr},
      {"POST", "/api/v1/reviews", &Service::submit_review, nullptr},
      {"GET", "/api/v1/aps", nullptr, &Service::region_query},
      {"GET", "/api/v1/clusters", nullptr, &Service::clusters},
      {"GET", "/api/v1/leaderboard", nullptr, &Service::leaderboard},
      {"GET", "/api/v1/ownership", nullptr, &Service::ownership},
      {"GET", "/api/v1/snapshot", nullptr, &Service::snapshot},
  };

  auto fail = [](const ApiError& e) { return Response{e.http_status, "application/json", error_body(e)}; };
  try {
    bool path_known = false;
    for (const auto& route : kRoutes) {
      if (request.path != route.path) continue;
      path_known = true;
      if (request.method != route.method) continue;
      return route.body_handler ? (this->*route.body_handler)(request.body)
                                : (this->*route.query_handler)(request.query);
    }
    if (path_known) {
      return fail({405, "malformed_body", "method " + request.method + " not allowed here", {}});
    }
    return fail({404, "malformed_body", "no route for " + request.path, {}});
  } catch (const Error& e) {
    return fail(to_api_error(e));
  } catch (const std::exception&) {
    return fail({500, "internal", "internal error", {}});
  }
}

Response Service::register_user(const std::string& body) const {
  const auto j = parse_body(body);
  UserAccount user;
  user.user_id = required_string(j, "user_id");
  user.display_name = required_string(j, "display_name");
  user.avatar_ref = optional_string(j, "avatar_ref").value_or("");
  user.registered_at = optional_integer(j, "registered_at").value_or(stamp());
  const auto result = store_.append(make_event(std::move(user)));
  return json_response(201, codec::to_json(*result.reward));
}

Response Service::submit_review(const std::string& body) const {
  const auto j = parse_body(body);
  Review review;
  review.user_id = required_string(j, "user_id");
  const auto ap_id = optional_string(j, "ap_id");
  const auto bssid = optional_string(j, "bssid");
  if (!ap_id && !bssid) throw Error(ErrorCode::kMalformedBody, "one of 'ap_id' or 'bssid' is required");
  review.ap_id = canonical_ap_id(ap_id ? *ap_id : *bssid);
  review.at = optional_integer(j, "at").value_or(stamp());
  const auto rating = optional_integer(j, "rating");
  if (!rating) throw Error(ErrorCode::kMalformedBody, "field 'rating' must be an integer");
  review.rating = *rating < -1 ? -1 : *rating > 6 ? 6 : static_cast<int>(*rating);
  review.review_id = optional_string(j, "review_id")
                         .value_or("rv:" + review.user_id + ":" + review.ap_id + ":" +
                                   std::to_string(review.at));
  review.comment = optional_string(j, "comment");
  if (const auto* m = member(j, "metrics")) review.metrics = codec::metrics_from_json(*m);
  if (const auto* p = member(j, "place")) review.place = codec::place_from_json(*p);

  std::optional<NewApFields> ap_fields;
  if (const auto* ap = member(j, "ap")) {
    NewApFields fields;
    fields.ssid = required_string(*ap, "ssid");
    const auto* loc = member(*ap, "location");
    if (loc == nullptr) throw Error(ErrorCode::kMalformedBody, "field 'ap.location' is required");
    fields.location = codec::geo_from_json(*loc);
    if (const auto* p = member(*ap, "place")) fields.place = codec::place_from_json(*p);
    ap_fields = std::move(fields);
  }
  const auto reward = wifiscout::submit_review(store_, review, ap_fields);
  return json_response(201, codec::to_json(reward));
}

Response Service::region_query(const Query& query) const {
  const auto bbox = required_bbox(query);
  std::optional<double> min_rating;
  if (const auto it = query.find("min_rating"); it != query.end()) {
    min_rating = detail::parse_double(it->second);
    if (!min_rating) throw Error(ErrorCode::kValidationFailed, "min_rating must be a number");
  }
  const auto summaries = store_.read([&](const PlatformState& s) { return s.summaries_in(bbox); });
  json out = json::array();
  for (const auto& s : query_region(summaries, bbox, min_rating)) out.push_back(codec::to_json(s));
  return json_response(200, out);
}

Response Service::clusters(const Query& query) const {
  const auto bbox = required_bbox(query);
  const auto aps = store_.read([](const PlatformState& s) { return s.access_points(); });
  std::vector<Cluster> result;
  if (const auto it = query.find("zoom"); it != query.end()) {
    const auto zoom = detail::parse_int<int>(it->second);
    if (!zoom) throw Error(ErrorCode::kValidationFailed, "zoom must be an integer in 1..20");
    result = clusters_for_viewport(aps, bbox, *zoom);
  } else {
    std::vector<AccessPoint> inside;
    for (const auto& ap : aps) {
      if (bbox.contains(ap.location)) inside.push_back(ap);
    }
    result = cluster_aps(inside, config_.cluster_radius_m);
  }
  json out = json::array();
  for (const auto& c : result) out.push_back(codec::to_json(c));
  return json_response(200, out);
}

Response Service::leaderboard(const Query& query) const {
  std::size_t n = kDefaultLeaderboardSize;
  if (const auto it = query.find("n"); it != query.end()) {
    const auto parsed = detail::parse_int<std::size_t>(it->second);
    if (!parsed) throw Error(ErrorCode::kValidationFailed, "n must be a non-negative integer");
    n = *parsed;
  }
  const auto out = store_.read([&](const PlatformState& s) {
    json rows = json::array();
    std::size_t rank = 0;
    for (const auto& e : s.ledger().leaderboard(n)) {
      const auto* user = s.find_user(e.user_id);
      rows.push_back({{"rank", ++rank},
                      {"user_id", e.user_id},
                      {"total_points", e.total_points},
                      {"display_name", user ? user->display_name : ""},
                      {"avatar_ref", user ? user->avatar_ref : ""}});
    }
    return rows;
  });
  return json_response(200, out);
}

Response Service::ownership(const Query& query) const {
  const auto bbox = query_bbox(query);
  const auto out = store_.read([&](const PlatformState& s) {
    json rows = json::array();
    for (const auto& ap : s.access_points()) {
      if (bbox && !bbox->contains(ap.location)) continue;
      json row{{"ap_id", ap.ap_id}, {"ssid", ap.ssid}, {"location", codec::to_json(ap.location)}};
      if (const auto owner = s.ledger().owner_of(ap.ap_id)) {
        row["owner_user_id"] = *owner;
        if (const auto* user = s.find_user(*owner)) {
          row["avatar_ref"] = user->avatar_ref;
          row["display_name"] = user->display_name;
        }
      }
      rows.push_back(std::move(row));
    }
    return rows;
  });
  return json_response(200, out);
}

Response Service::snapshot(const Query& query) const {
  const auto bbox = query_bbox(query);
  auto bytes = store_.read([&](const PlatformState& s) { return export_snapshot(s, bbox); });
  return {200, "application/octet-stream", std::move(bytes)};
}

}  // namespace wifiscout::api
