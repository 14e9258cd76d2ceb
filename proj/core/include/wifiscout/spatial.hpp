#pragma once

#include <span>
#include <string>
#include <vector>

#include "wifiscout/domain.hpp"

namespace wifiscout {

inline constexpr double kEarthRadiusM = 6371000.0;

// Great-circle distance on a sphere of radius kEarthRadiusM.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

struct Cluster {
  // Smallest member ap_id.
  std::string cluster_id;
  // Arithmetic mean of member coordinates, clamped to the members' bounds.
  GeoPoint centroid;
  // Ascending.
  std::vector<ApId> member_ap_ids;

  std::size_t size() const { return member_ap_ids.size(); }

  bool operator==(const Cluster&) const = default;
};

// Points at or above this count go through the grid index.
inline constexpr std::size_t kGridIndexThreshold = 64;

// Connected components of the graph joining APs no more than radius_m apart,
// sorted by cluster_id. Throws Error{kValidationFailed} if radius_m <= 0.
std::vector<Cluster> cluster_aps(std::span<const AccessPoint> aps, double radius_m);

// Same partition, forcing the O(n^2) pair scan or the grid index. Exposed so
// both paths can be checked against each other.
std::vector<Cluster> cluster_aps_pairwise(std::span<const AccessPoint> aps, double radius_m);
std::vector<Cluster> cluster_aps_grid(std::span<const AccessPoint> aps, double radius_m);

inline constexpr int kMinZoom = 1;
inline constexpr int kMaxZoom = 20;

// 40,000 km / 2^(zoom + 3): halves per zoom level, ~76 m at zoom 16.
double viewport_radius_m(int zoom);

// Filters to the bbox, then clusters at viewport_radius_m(zoom).
// Throws Error{kInvalidBbox} or Error{kValidationFailed} for zoom outside 1..20.
std::vector<Cluster> clusters_for_viewport(std::span<const AccessPoint> aps, const Bbox& bbox,
                                           int zoom);

}  // namespace wifiscout
