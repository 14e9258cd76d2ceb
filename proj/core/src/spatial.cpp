#include "wifiscout/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "wifiscout/error.hpp"

namespace wifiscout {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

struct CellKey {
  std::int64_t x;
  std::int64_t y;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    const auto h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ull;
    return static_cast<std::size_t>(h ^ (static_cast<std::uint64_t>(k.y) + 0x632BE59BD9B4E019ull +
                                         (h << 6) + (h >> 2)));
  }
};

void check_radius(double radius_m) {
  if (!(radius_m > 0.0) || !std::isfinite(radius_m)) {
    throw Error(ErrorCode::kValidationFailed, "cluster radius must be positive and finite");
  }
}

std::vector<Cluster> collect(std::span<const AccessPoint> aps, DisjointSet& sets) {
  std::unordered_map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < aps.size(); ++i) groups[sets.find(i)].push_back(i);

  std::vector<Cluster> clusters;
  clusters.reserve(groups.size());
  for (auto& [root, members] : groups) {
    // Member order fixes the summation order, so the centroid's bits do not
    // depend on input order.
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return aps[a].ap_id < aps[b].ap_id; });
    Cluster cluster;
    double lat_sum = 0.0;
    double lon_sum = 0.0;
    double lat_lo = 90.0, lat_hi = -90.0, lon_lo = 180.0, lon_hi = -180.0;
    cluster.member_ap_ids.reserve(members.size());
    for (auto idx : members) {
      const auto& p = aps[idx].location;
      lat_sum += p.lat;
      lon_sum += p.lon;
      lat_lo = std::min(lat_lo, p.lat);
      lat_hi = std::max(lat_hi, p.lat);
      lon_lo = std::min(lon_lo, p.lon);
      lon_hi = std::max(lon_hi, p.lon);
      cluster.member_ap_ids.push_back(aps[idx].ap_id);
    }
    const auto n = static_cast<double>(members.size());
    cluster.centroid = {std::clamp(lat_sum / n, lat_lo, lat_hi),
                        std::clamp(lon_sum / n, lon_lo, lon_hi)};
    cluster.cluster_id = cluster.member_ap_ids.front();
    clusters.push_back(std::move(cluster));
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.cluster_id < b.cluster_id; });
  return clusters;
}

}  // namespace

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlat = lat2 - lat1;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  const double h = s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, h)));
}

std::vector<Cluster> cluster_aps_pairwise(std::span<const AccessPoint> aps, double radius_m) {
  check_radius(radius_m);
  DisjointSet sets(aps.size());
  for (std::size_t i = 0; i < aps.size(); ++i) {
    for (std::size_t j = i + 1; j < aps.size(); ++j) {
      if (haversine_m(aps[i].location, aps[j].location) <= radius_m) sets.unite(i, j);
    }
  }
  return collect(aps, sets);
}

std::vector<Cluster> cluster_aps_grid(std::span<const AccessPoint> aps, double radius_m) {
  check_radius(radius_m);
  if (aps.empty()) return {};

  // Angular radius, padded so rounding never drops a qualifying pair from
  // the candidate cells. Padding only adds candidates.
  const double theta = radius_m / kEarthRadiusM * (1.0 + 1e-9);
  if (theta >= std::numbers::pi / 2.0) return cluster_aps_pairwise(aps, radius_m);

  double max_abs_lat = 0.0;
  for (const auto& ap : aps) max_abs_lat = std::max(max_abs_lat, std::abs(ap.location.lat));

  // Two points within theta differ in latitude by at most theta. For
  // longitude, hav(dlon) <= hav(theta) / cos^2(max |lat|).
  const double cell_lat_deg = theta * kRadToDeg * (1.0 + 1e-9) + 1e-12;
  const double cos_max = std::cos(max_abs_lat * kDegToRad);
  const double lon_bound = cos_max > 0.0 ? std::sin(theta / 2.0) / cos_max : 2.0;
  std::int64_t lon_columns = 1;
  if (lon_bound < 1.0) {
    const double dlon_deg = 2.0 * std::asin(lon_bound) * kRadToDeg * (1.0 + 1e-9) + 1e-12;
    lon_columns = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(360.0 / dlon_deg)));
  }
  const double cell_lon_deg = 360.0 / static_cast<double>(lon_columns);

  auto cell_of = [&](const GeoPoint& p) {
    auto y = static_cast<std::int64_t>(std::floor((p.lat + 90.0) / cell_lat_deg));
    auto x = static_cast<std::int64_t>(std::floor((p.lon + 180.0) / cell_lon_deg));
    x = ((x % lon_columns) + lon_columns) % lon_columns;
    return std::pair{x, y};
  };
  auto key = [](std::int64_t x, std::int64_t y) { return CellKey{x, y}; };

  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> cells;
  std::vector<std::pair<std::int64_t, std::int64_t>> cell_index(aps.size());
  for (std::size_t i = 0; i < aps.size(); ++i) {
    cell_index[i] = cell_of(aps[i].location);
    cells[key(cell_index[i].first, cell_index[i].second)].push_back(i);
  }

  DisjointSet sets(aps.size());
  std::vector<std::int64_t> columns;
  for (std::size_t i = 0; i < aps.size(); ++i) {
    const auto [x, y] = cell_index[i];
    columns.clear();
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      const auto cx = ((x + dx) % lon_columns + lon_columns) % lon_columns;
      if (std::find(columns.begin(), columns.end(), cx) == columns.end()) columns.push_back(cx);
    }
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      for (auto cx : columns) {
        const auto it = cells.find(key(cx, y + dy));
        if (it == cells.end()) continue;
        for (auto j : it->second) {
          if (j <= i || sets.find(i) == sets.find(j)) continue;
          if (haversine_m(aps[i].location, aps[j].location) <= radius_m) sets.unite(i, j);
        }
      }
    }
  }
  return collect(aps, sets);
}

std::vector<Cluster> cluster_aps(std::span<const AccessPoint> aps, double radius_m) {
  if (aps.size() >= kGridIndexThreshold) return cluster_aps_grid(aps, radius_m);
  return cluster_aps_pairwise(aps, radius_m);
}

double viewport_radius_m(int zoom) { return 40'000'000.0 / std::ldexp(1.0, zoom + 3); }

std::vector<Cluster> clusters_for_viewport(std::span<const AccessPoint> aps, const Bbox& bbox,
                                           int zoom) {
  check_bbox(bbox);
  if (zoom < kMinZoom || zoom > kMaxZoom) {
    throw Error(ErrorCode::kValidationFailed, "zoom must be in 1..20");
  }
  std::vector<AccessPoint> inside;
  for (const auto& ap : aps) {
    if (bbox.contains(ap.location)) inside.push_back(ap);
  }
  return cluster_aps(inside, viewport_radius_m(zoom));
}

}  // namespace wifiscout
