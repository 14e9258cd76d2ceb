#pragma once

// JSON mapping of domain values, shared by the event log, the HTTP API, and
// the simulate report. nlohmann::json orders object keys, so dumps are
// deterministic for equal values.

#include <json.hpp>

#include "wifiscout/domain.hpp"
#include "wifiscout/reward.hpp"
#include "wifiscout/spatial.hpp"
#include "wifiscout/store.hpp"

namespace wifiscout::codec {

using nlohmann::json;

json to_json(const GeoPoint& p);
json to_json(const PlaceTag& place);
json to_json(const NetMetrics& m);
json to_json(const AccessPoint& ap);
json to_json(const UserAccount& user);
json to_json(const Review& review);
json to_json(const RewardEvent& event);
json to_json(const ApSummary& summary);
json to_json(const Cluster& cluster);
json to_json(const Event& event);

// Throw Error{kMalformedBody} on missing or mistyped fields. Domain
// invariants are not checked here.
GeoPoint geo_from_json(const json& j);
PlaceTag place_from_json(const json& j);
NetMetrics metrics_from_json(const json& j);
AccessPoint access_point_from_json(const json& j);
UserAccount user_from_json(const json& j);
Review review_from_json(const json& j);
Event event_from_json(const json& j);

}  // namespace wifiscout::codec
