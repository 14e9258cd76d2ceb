#include "json_codec.hpp"

#include "wifiscout/error.hpp"

namespace wifiscout::codec {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedBody, what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) malformed("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

bool has(const json& j, const char* key) {
  const auto it = j.find(key);
  return it != j.end() && !it->is_null();
}

std::string text(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) malformed(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_text(const json& j, const char* key) {
  if (!has(j, key)) return std::nullopt;
  return text(j, key);
}

double number(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) malformed(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t integer(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) malformed(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

json to_json(const GeoPoint& p) { return json{{"lat", p.lat}, {"lon", p.lon}}; }

json to_json(const PlaceTag& place) {
  json j{{"street_address", place.street_address}};
  if (place.floor) j["floor"] = *place.floor;
  if (place.room) j["room"] = *place.room;
  return j;
}

json to_json(const NetMetrics& m) {
  return json{{"rssi_dbm", m.rssi_dbm},
              {"link_speed_mbps", m.link_speed_mbps},
              {"upload_mbps", m.upload_mbps},
              {"download_mbps", m.download_mbps}};
}

json to_json(const AccessPoint& ap) {
  json j{{"ap_id", ap.ap_id},
         {"ssid", ap.ssid},
         {"location", to_json(ap.location)},
         {"source", std::string(to_string(ap.source))}};
  if (ap.bssid) j["bssid"] = *ap.bssid;
  if (ap.place) j["place"] = to_json(*ap.place);
  return j;
}

json to_json(const UserAccount& user) {
  return json{{"user_id", user.user_id},
              {"display_name", user.display_name},
              {"avatar_ref", user.avatar_ref},
              {"registered_at", user.registered_at}};
}

json to_json(const Review& review) {
  json j{{"review_id", review.review_id},
         {"user_id", review.user_id},
         {"ap_id", review.ap_id},
         {"at", review.at},
         {"rating", review.rating}};
  if (review.comment) j["comment"] = *review.comment;
  if (review.metrics) j["metrics"] = to_json(*review.metrics);
  if (review.place) j["place"] = to_json(*review.place);
  return j;
}

json to_json(const RewardEvent& event) {
  json j{{"event_id", event.event_id},
         {"user_id", event.user_id},
         {"at", event.at},
         {"points", event.points},
         {"rule_case", std::string(to_string(event.rule_case))}};
  if (event.ap_id) j["ap_id"] = *event.ap_id;
  return j;
}

json to_json(const ApSummary& s) {
  json j{{"ap", to_json(s.ap)}, {"review_count", s.review_count}};
  if (s.mean_rating) j["mean_rating"] = *s.mean_rating;
  if (s.latest_metrics) j["latest_metrics"] = to_json(*s.latest_metrics);
  if (s.latest_review_at) j["latest_review_at"] = *s.latest_review_at;
  if (s.owner_user_id) j["owner_user_id"] = *s.owner_user_id;
  return j;
}

json to_json(const Cluster& c) {
  return json{{"cluster_id", c.cluster_id},
              {"centroid", to_json(c.centroid)},
              {"size", c.size()},
              {"member_ap_ids", c.member_ap_ids}};
}

json to_json(const Event& event) {
  json payload = std::visit([](const auto& v) { return to_json(v); }, event.payload);
  return json{{"seq", event.seq},
              {"kind", std::string(to_string(event.kind))},
              {"at", event.at},
              {"payload", std::move(payload)}};
}

GeoPoint geo_from_json(const json& j) { return {number(j, "lat"), number(j, "lon")}; }

PlaceTag place_from_json(const json& j) {
  return PlaceTag{text(j, "street_address"), optional_text(j, "floor"), optional_text(j, "room")};
}

NetMetrics metrics_from_json(const json& j) {
  const auto rssi = integer(j, "rssi_dbm");
  if (rssi < std::numeric_limits<int>::min() || rssi > std::numeric_limits<int>::max()) {
    malformed("rssi_dbm out of integer range");
  }
  return NetMetrics{static_cast<int>(rssi), number(j, "link_speed_mbps"), number(j, "upload_mbps"),
                    number(j, "download_mbps")};
}

AccessPoint access_point_from_json(const json& j) {
  AccessPoint ap;
  ap.ap_id = text(j, "ap_id");
  ap.bssid = optional_text(j, "bssid");
  ap.ssid = text(j, "ssid");
  ap.location = geo_from_json(field(j, "location"));
  if (has(j, "place")) ap.place = place_from_json(j["place"]);
  const auto source = text(j, "source");
  if (source == "external") {
    ap.source = ApSource::kExternal;
  } else if (source == "crowdsensed") {
    ap.source = ApSource::kCrowdsensed;
  } else {
    malformed("unknown AP source '" + source + "'");
  }
  return ap;
}

UserAccount user_from_json(const json& j) {
  return UserAccount{text(j, "user_id"), text(j, "display_name"), text(j, "avatar_ref"),
                     integer(j, "registered_at")};
}

Review review_from_json(const json& j) {
  Review r;
  r.review_id = text(j, "review_id");
  r.user_id = text(j, "user_id");
  r.ap_id = text(j, "ap_id");
  r.at = integer(j, "at");
  const auto rating = integer(j, "rating");
  // Out-of-range ratings are a validation matter, not a parse error; clamp
  // only what cannot be represented.
  r.rating = rating < -1000 ? -1000 : rating > 1000 ? 1000 : static_cast<int>(rating);
  r.comment = optional_text(j, "comment");
  if (has(j, "metrics")) r.metrics = metrics_from_json(j["metrics"]);
  if (has(j, "place")) r.place = place_from_json(j["place"]);
  return r;
}

Event event_from_json(const json& j) {
  Event event;
  const auto seq = integer(j, "seq");
  if (seq < 0) malformed("negative seq");
  event.seq = static_cast<std::uint64_t>(seq);
  const auto kind = parse_event_kind(text(j, "kind"));
  if (!kind) malformed("unknown event kind");
  event.kind = *kind;
  event.at = integer(j, "at");
  const auto& payload = field(j, "payload");
  switch (event.kind) {
    case EventKind::kUserRegistered: event.payload = user_from_json(payload); break;
    case EventKind::kApUpserted: event.payload = access_point_from_json(payload); break;
    case EventKind::kReviewSubmitted: event.payload = review_from_json(payload); break;
  }
  return event;
}

}  // namespace wifiscout::codec
