#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wifiscout/domain.hpp"
#include "wifiscout/reward.hpp"
#include "wifiscout/store.hpp"

namespace wifiscout {

// Exact header line required of external hotspot CSV files.
inline constexpr std::string_view kExternalCsvHeader =
    "ssid,lat,lon,street_address,floor,room,operator";

struct ExternalHotspotRow {
  std::string ssid;
  double lat = 0.0;
  double lon = 0.0;
  std::string street_address;
  std::optional<std::string> floor;
  std::optional<std::string> room;
  std::optional<std::string> operator_name;
};

struct RowError {
  std::size_t line_no = 0;
  std::string reason;

  bool operator==(const RowError&) const = default;
};

struct ImportResult {
  std::size_t imported = 0;
  std::vector<RowError> errors;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// "ext:" + 16 lowercase hex digits of fnv1a64("<ssid>|<lat>|<lon>"), with
// lat/lon in shortest round-trip decimal form.
std::string external_ap_id(std::string_view ssid, double lat, double lon);

AccessPoint to_access_point(const ExternalHotspotRow& row);

// Parses the CSV and upserts every valid row as an external AP. Rows whose
// AP already exists unchanged are skipped, so re-importing is a no-op.
// Row problems are collected, not thrown. Upserts are stamped
// max(at, log head). Throws Error{kMalformedHeader} when the first line is
// not kExternalCsvHeader.
ImportResult import_external_csv(AdvisoryStore& store, std::string_view bytes, Timestamp at);

// AP fields a review may carry so its first reviewer can register an unseen
// BSSID.
struct NewApFields {
  std::string ssid;
  GeoPoint location;
  std::optional<PlaceTag> place;
};

// validate -> reward -> append as one unit. Throws Error{kValidationFailed},
// Error{kUnknownUser}, Error{kUnknownAp} (unknown AP, no fields supplied),
// Error{kStaleTimestamp}, or Error{kNonMonotonicTimestamp}; on any throw the
// store is unchanged.
RewardEvent submit_review(AdvisoryStore& store, const Review& review,
                          const std::optional<NewApFields>& ap_fields = std::nullopt);

}  // namespace wifiscout
