#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "wifiscout/reward.hpp"

namespace wifiscout {

// Service configuration, read from a JSON object with the keys
// starting_points, full_reward, interval_threshold_secs, cluster_radius_m,
// port, data_dir, fsync_batch. Missing keys keep their defaults.
struct ServiceConfig {
  RewardConfig reward;
  // Radius for clustering requests that carry no zoom level.
  double cluster_radius_m = 100.0;
  int port = 8080;
  std::string data_dir = "data";
  unsigned fsync_batch = 1;
};

// Throws Error{kValidationFailed} for bad values or unknown keys,
// Error{kMalformedBody} for unparsable JSON.
ServiceConfig parse_config(std::string_view json_text);
ServiceConfig load_config(const std::filesystem::path& path);

}  // namespace wifiscout
