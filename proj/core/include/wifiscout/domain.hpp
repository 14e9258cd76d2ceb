#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wifiscout {

// UTC seconds since the Unix epoch.
using Timestamp = std::int64_t;

using UserId = std::string;
using ApId = std::string;

inline constexpr std::string_view kExternalIdPrefix = "ext:";
inline constexpr std::size_t kMaxCommentChars = 1000;
inline constexpr int kMinRssiDbm = -120;
inline constexpr int kMaxRssiDbm = 0;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

// -90 <= lat <= 90, -180 < lon <= 180, both finite.
bool is_valid(const GeoPoint& p);

// Inclusive lat/lon rectangle. No antimeridian wrapping: min_lon <= max_lon.
struct Bbox {
  double min_lat = 0.0;
  double min_lon = 0.0;
  double max_lat = 0.0;
  double max_lon = 0.0;

  bool contains(const GeoPoint& p) const {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
  }

  bool operator==(const Bbox&) const = default;
};

// Throws Error{kInvalidBbox} when min > max on either axis or a bound is not
// a valid coordinate.
void check_bbox(const Bbox& bbox);

// Parses the wire form "min_lat,min_lon,max_lat,max_lon" and checks it.
Bbox parse_bbox(std::string_view text);
std::string format_bbox(const Bbox& bbox);

struct PlaceTag {
  std::string street_address;
  std::optional<std::string> floor;
  std::optional<std::string> room;

  bool operator==(const PlaceTag&) const = default;
};

struct NetMetrics {
  int rssi_dbm = 0;
  double link_speed_mbps = 0.0;
  double upload_mbps = 0.0;
  double download_mbps = 0.0;

  bool operator==(const NetMetrics&) const = default;
};

enum class ApSource { kCrowdsensed, kExternal };

std::string_view to_string(ApSource source);

struct AccessPoint {
  ApId ap_id;
  std::optional<std::string> bssid;
  std::string ssid;
  GeoPoint location;
  std::optional<PlaceTag> place;
  ApSource source = ApSource::kCrowdsensed;

  bool operator==(const AccessPoint&) const = default;
};

struct UserAccount {
  UserId user_id;
  std::string display_name;
  std::string avatar_ref;
  Timestamp registered_at = 0;

  bool operator==(const UserAccount&) const = default;
};

struct Review {
  std::string review_id;
  UserId user_id;
  ApId ap_id;
  Timestamp at = 0;
  int rating = 0;
  std::optional<std::string> comment;
  std::optional<NetMetrics> metrics;
  std::optional<PlaceTag> place;

  bool operator==(const Review&) const = default;
};

// Normalizes 12 hex digits, optionally separated by ':' or '-', to the
// lowercase colon-separated form. Throws Error{kMalformedBssid}.
std::string canonicalize_bssid(std::string_view raw);

// True when `text` is already in canonical bssid form.
bool is_canonical_bssid(std::string_view text);

// Number of Unicode scalar values, or nullopt for ill-formed UTF-8.
std::optional<std::size_t> utf8_length(std::string_view text);

// One human-readable entry per violated invariant; empty when valid.
std::vector<std::string> review_violations(const Review& review);
std::vector<std::string> access_point_violations(const AccessPoint& ap);
std::vector<std::string> user_violations(const UserAccount& user);

// Returns `candidate` unchanged or throws Error{kValidationFailed} whose
// details() lists every violation.
const Review& validate_review(const Review& candidate);

}  // namespace wifiscout
