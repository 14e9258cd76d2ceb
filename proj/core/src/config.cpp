#include "wifiscout/config.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "wifiscout/error.hpp"

namespace wifiscout {

namespace {

using nlohmann::json;

std::int64_t integer(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kValidationFailed, std::string("config key '") + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

}  // namespace

ServiceConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedBody, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kMalformedBody, "config must be a JSON object");

  ServiceConfig config;
  for (const auto& [key, value] : j.items()) {
    if (key == "starting_points") {
      config.reward.starting_points = integer(j, "starting_points");
    } else if (key == "full_reward") {
      config.reward.full_reward = integer(j, "full_reward");
    } else if (key == "interval_threshold_secs") {
      config.reward.interval_threshold_secs = integer(j, "interval_threshold_secs");
    } else if (key == "cluster_radius_m") {
      if (!value.is_number() || !(value.get<double>() > 0.0) || !std::isfinite(value.get<double>())) {
        throw Error(ErrorCode::kValidationFailed, "cluster_radius_m must be a positive number");
      }
      config.cluster_radius_m = value.get<double>();
    } else if (key == "port") {
      const auto port = integer(j, "port");
      if (port < 0 || port > 65535) throw Error(ErrorCode::kValidationFailed, "port out of range");
      config.port = static_cast<int>(port);
    } else if (key == "data_dir") {
      if (!value.is_string()) throw Error(ErrorCode::kValidationFailed, "data_dir must be a string");
      config.data_dir = value.get<std::string>();
    } else if (key == "fsync_batch") {
      const auto batch = integer(j, "fsync_batch");
      if (batch < 1) throw Error(ErrorCode::kValidationFailed, "fsync_batch must be >= 1");
      config.fsync_batch = static_cast<unsigned>(batch);
    } else {
      throw Error(ErrorCode::kValidationFailed, "unknown config key '" + key + "'");
    }
  }
  config.reward.check();
  return config;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kStorageFailure, "cannot read config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

}  // namespace wifiscout
