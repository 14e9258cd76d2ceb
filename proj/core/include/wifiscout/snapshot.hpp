#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wifiscout/domain.hpp"
#include "wifiscout/store.hpp"

namespace wifiscout {

inline constexpr int kSnapshotFormatVersion = 1;

// Offline-search replica of AP summaries.
//
// Text format, UTF-8, one record per line, every line '\n'-terminated:
//
//   wifiscout-snapshot v1 <generated_at> <min_lat,min_lon,max_lat,max_lon | all>
//   ap_id \t ssid \t lat \t lon \t street_address \t floor \t room \t
//     review_count \t mean_rating \t rssi_dbm \t link_speed_mbps \t
//     upload_mbps \t download_mbps \t latest_review_at \t owner_user_id
//
// Absent optionals are empty fields. Reals use the shortest decimal that
// round-trips. Backslash, tab, CR and LF inside strings are written as
// \\ \t \r \n. Records are strictly ascending by ap_id.
struct Snapshot {
  int format_version = kSnapshotFormatVersion;
  Timestamp generated_at = 0;
  std::optional<Bbox> bbox;
  std::vector<ApSummary> entries;

  bool operator==(const Snapshot&) const = default;
};

// Summaries of `state` (inside bbox when given), stamped with the time of
// the last applied event so identical state always exports identical bytes.
Snapshot make_snapshot(const PlatformState& state, const std::optional<Bbox>& bbox = std::nullopt);

std::string encode_snapshot(const Snapshot& snapshot);

// Throws Error{kUnsupportedVersion} or MalformedSnapshot.
Snapshot import_snapshot(std::string_view bytes);

inline std::string export_snapshot(const PlatformState& state,
                                   const std::optional<Bbox>& bbox = std::nullopt) {
  return encode_snapshot(make_snapshot(state, bbox));
}

}  // namespace wifiscout
