#include "wifiscout/domain.hpp"

#include <array>
#include <cctype>
#include <cmath>

#include "numfmt.hpp"
#include "wifiscout/error.hpp"

namespace wifiscout {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidationFailed: return "validation_failed";
    case ErrorCode::kMalformedBssid: return "malformed_bssid";
    case ErrorCode::kUnknownUser: return "unknown_user";
    case ErrorCode::kUnknownAp: return "unknown_ap";
    case ErrorCode::kDuplicateUser: return "duplicate_user";
    case ErrorCode::kInvalidBbox: return "invalid_bbox";
    case ErrorCode::kStaleTimestamp: return "stale_timestamp";
    case ErrorCode::kNonMonotonicTimestamp: return "non_monotonic_timestamp";
    case ErrorCode::kMalformedBody: return "malformed_body";
    case ErrorCode::kUnsupportedVersion: return "unsupported_version";
    case ErrorCode::kMalformedSnapshot: return "malformed_snapshot";
    case ErrorCode::kMalformedHeader: return "malformed_header";
    case ErrorCode::kCorruptLog: return "corrupt_log";
    case ErrorCode::kStorageFailure: return "storage_failure";
    case ErrorCode::kInternal: return "internal";
  }
  return "internal";
}

std::string_view to_string(ApSource source) {
  return source == ApSource::kExternal ? "external" : "crowdsensed";
}

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon > -180.0 && p.lon <= 180.0;
}

void check_bbox(const Bbox& bbox) {
  auto in_range = [](double lat, double lon) {
    // A bbox edge may sit on -180 even though no point can.
    return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
           lon >= -180.0 && lon <= 180.0;
  };
  if (!in_range(bbox.min_lat, bbox.min_lon) || !in_range(bbox.max_lat, bbox.max_lon)) {
    throw Error(ErrorCode::kInvalidBbox, "bbox bound out of coordinate range");
  }
  if (bbox.min_lat > bbox.max_lat || bbox.min_lon > bbox.max_lon) {
    throw Error(ErrorCode::kInvalidBbox, "bbox min exceeds max");
  }
}

Bbox parse_bbox(std::string_view text) {
  std::array<double, 4> v{};
  std::size_t field = 0;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (field >= v.size()) {
      throw Error(ErrorCode::kInvalidBbox, "bbox needs exactly 4 comma-separated numbers");
    }
    const auto parsed = detail::parse_double(part);
    if (!parsed) {
      throw Error(ErrorCode::kInvalidBbox, "bbox field is not a number: '" + std::string(part) + "'");
    }
    v[field++] = *parsed;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (field != v.size()) {
    throw Error(ErrorCode::kInvalidBbox, "bbox needs exactly 4 comma-separated numbers");
  }
  Bbox bbox{v[0], v[1], v[2], v[3]};
  check_bbox(bbox);
  return bbox;
}

std::string format_bbox(const Bbox& bbox) {
  return detail::format_double(bbox.min_lat) + ',' + detail::format_double(bbox.min_lon) + ',' +
         detail::format_double(bbox.max_lat) + ',' + detail::format_double(bbox.max_lon);
}

std::string canonicalize_bssid(std::string_view raw) {
  std::string hex;
  hex.reserve(12);
  char separator = 0;
  std::size_t since_separator = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == ':' || c == '-') {
      // Separators may only sit between whole octets and must not be mixed.
      if (since_separator != 2 || (separator != 0 && separator != c)) {
        throw Error(ErrorCode::kMalformedBssid, "malformed bssid '" + std::string(raw) + "'");
      }
      separator = c;
      since_separator = 0;
      continue;
    }
    if (!std::isxdigit(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::kMalformedBssid, "malformed bssid '" + std::string(raw) + "'");
    }
    if (separator != 0 && since_separator == 2) {
      throw Error(ErrorCode::kMalformedBssid, "malformed bssid '" + std::string(raw) + "'");
    }
    hex.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    ++since_separator;
  }
  if (hex.size() != 12 || (separator != 0 && since_separator != 2)) {
    throw Error(ErrorCode::kMalformedBssid, "malformed bssid '" + std::string(raw) + "'");
  }
  std::string out;
  out.reserve(17);
  for (std::size_t i = 0; i < 12; i += 2) {
    if (i != 0) out.push_back(':');
    out.append(hex, i, 2);
  }
  return out;
}

bool is_canonical_bssid(std::string_view text) {
  if (text.size() != 17) return false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (i % 3 == 2) {
      if (c != ':') return false;
    } else if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
      return false;
    }
  }
  return true;
}

std::optional<std::size_t> utf8_length(std::string_view text) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (lead < 0x80) {
      len = 1;
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      len = 2;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      len = 3;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      len = 4;
      cp = lead & 0x07;
    } else {
      return std::nullopt;
    }
    if (i + len > text.size()) return std::nullopt;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) return std::nullopt;
      cp = (cp << 6) | (cont & 0x3F);
    }
    // Overlong forms, surrogates, and values past U+10FFFF.
    static constexpr std::array<std::uint32_t, 5> kMinForLen{0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return std::nullopt;
    }
    i += len;
    ++count;
  }
  return count;
}

namespace {

void place_violations(const PlaceTag& place, std::string_view prefix,
                      std::vector<std::string>& out) {
  if (place.street_address.empty()) {
    out.push_back(std::string(prefix) + "street_address is empty");
  }
  // Absent and empty must stay distinguishable in text formats.
  if (place.floor && place.floor->empty()) out.push_back(std::string(prefix) + "floor is empty");
  if (place.room && place.room->empty()) out.push_back(std::string(prefix) + "room is empty");
}

}  // namespace

std::vector<std::string> review_violations(const Review& review) {
  std::vector<std::string> out;
  if (review.review_id.empty()) out.emplace_back("review_id is empty");
  if (review.user_id.empty()) out.emplace_back("user_id is empty");
  if (!is_canonical_bssid(review.ap_id) && !review.ap_id.starts_with(kExternalIdPrefix)) {
    out.emplace_back("ap_id is neither a canonical bssid nor an external id");
  }
  if (review.rating < 1 || review.rating > 5) out.emplace_back("rating out of range");
  if (review.at <= 0) out.emplace_back("at is not strictly positive");
  if (review.comment) {
    const auto len = utf8_length(*review.comment);
    if (!len) {
      out.emplace_back("comment is not valid UTF-8");
    } else if (*len > kMaxCommentChars) {
      out.emplace_back("comment longer than 1000 characters");
    }
  }
  if (review.metrics) {
    const auto& m = *review.metrics;
    if (m.rssi_dbm < kMinRssiDbm || m.rssi_dbm > kMaxRssiDbm) {
      out.emplace_back("rssi_dbm out of range");
    }
    auto speed = [&out](double v, const char* name) {
      if (!std::isfinite(v) || v < 0.0) out.push_back(std::string(name) + " is negative or not finite");
    };
    speed(m.link_speed_mbps, "link_speed_mbps");
    speed(m.upload_mbps, "upload_mbps");
    speed(m.download_mbps, "download_mbps");
  }
  if (review.place) place_violations(*review.place, "place.", out);
  return out;
}

std::vector<std::string> access_point_violations(const AccessPoint& ap) {
  std::vector<std::string> out;
  if (ap.bssid) {
    if (!is_canonical_bssid(*ap.bssid)) out.emplace_back("bssid is not canonical");
    if (ap.ap_id != *ap.bssid) out.emplace_back("ap_id differs from bssid");
  } else if (!ap.ap_id.starts_with(kExternalIdPrefix) || ap.ap_id.size() == kExternalIdPrefix.size()) {
    out.emplace_back("ap_id without bssid must carry the ext: prefix");
  }
  if (ap.ssid.empty()) out.emplace_back("ssid is empty");
  if (!is_valid(ap.location)) out.emplace_back("location out of range");
  if (ap.place) place_violations(*ap.place, "place.", out);
  return out;
}

std::vector<std::string> user_violations(const UserAccount& user) {
  std::vector<std::string> out;
  if (user.user_id.empty()) out.emplace_back("user_id is empty");
  if (user.registered_at < 0) out.emplace_back("registered_at is negative");
  return out;
}

const Review& validate_review(const Review& candidate) {
  auto violations = review_violations(candidate);
  if (!violations.empty()) {
    throw Error(ErrorCode::kValidationFailed, "review failed validation", std::move(violations));
  }
  return candidate;
}

}  // namespace wifiscout
