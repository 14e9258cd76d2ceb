#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "wifiscout/domain.hpp"
#include "wifiscout/store.hpp"

namespace fixtures {

inline std::string user_name(std::size_t i) { return "u" + std::to_string(1000 + i); }

inline std::string bssid(std::size_t i) {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "aa:bb:%02x:%02x:%02x:%02x", static_cast<unsigned>((i >> 24) & 0xFF),
                static_cast<unsigned>((i >> 16) & 0xFF), static_cast<unsigned>((i >> 8) & 0xFF),
                static_cast<unsigned>(i & 0xFF));
  return buf;
}

inline wifiscout::AccessPoint make_ap(std::size_t i, double lat, double lon) {
  wifiscout::AccessPoint ap;
  ap.ap_id = bssid(i);
  ap.bssid = ap.ap_id;
  ap.ssid = "net-" + std::to_string(i);
  ap.location = {lat, lon};
  return ap;
}

inline wifiscout::UserAccount make_user(const std::string& id, wifiscout::Timestamp at) {
  return {id, "Name " + id, "avatar/" + id, at};
}

inline wifiscout::Review make_review(const std::string& review_id, const std::string& user,
                                     const std::string& ap, wifiscout::Timestamp at, int rating) {
  wifiscout::Review r;
  r.review_id = review_id;
  r.user_id = user;
  r.ap_id = ap;
  r.at = at;
  r.rating = rating;
  return r;
}

// Random registration/review stream with non-decreasing timestamps and no
// repeated (user, ap, at). Half the reviews hit a small hot set of pairs so
// suppressed and spaced repeats are common; gaps include T - 1, T, T + 1.
struct StreamSpec {
  std::size_t users = 50;
  std::size_t aps = 100;
  std::size_t reviews = 9850;
  std::int64_t threshold = 21600;
  wifiscout::Timestamp start = 1'600'000'000;
};

inline std::vector<wifiscout::Event> random_stream(const StreamSpec& spec, std::mt19937_64& rng) {
  using namespace wifiscout;
  std::vector<Event> out;
  Timestamp now = spec.start;
  for (std::size_t a = 0; a < spec.aps; ++a) {
    std::uniform_real_distribution<double> lat(1.2, 1.5);
    std::uniform_real_distribution<double> lon(103.6, 104.0);
    out.push_back(make_event(make_ap(a, lat(rng), lon(rng)), now));
  }
  std::vector<std::string> registered;
  std::size_t next_user = 0;
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::int64_t t = spec.threshold;
  const std::int64_t gaps[] = {0, 1, 7, 60, 600, 3600, t - 1, t, t + 1, 2 * t};

  std::vector<std::pair<std::size_t, std::size_t>> hot;
  std::size_t reviews = 0;
  while (reviews < spec.reviews || next_user < spec.users) {
    now += pick(4) == 0 ? gaps[pick(std::size(gaps))] : static_cast<std::int64_t>(pick(3));
    const bool must_register = registered.empty() || reviews >= spec.reviews;
    if (next_user < spec.users && (must_register || pick(spec.reviews / spec.users + 1) == 0)) {
      registered.push_back(user_name(next_user++));
      out.push_back(make_event(make_user(registered.back(), now)));
      continue;
    }
    std::size_t u;
    std::size_t a;
    if (!hot.empty() && pick(2) == 0) {
      std::tie(u, a) = hot[pick(hot.size())];
    } else {
      u = pick(registered.size());
      a = pick(spec.aps);
      if (hot.size() < 20) hot.emplace_back(u, a);
    }
    // Same pair in the same second would be a duplicate review.
    bool clash = false;
    for (auto it = out.rbegin(); it != out.rend() && it->at == now; ++it) {
      if (it->kind != EventKind::kReviewSubmitted) continue;
      const auto& r = std::get<Review>(it->payload);
      if (r.user_id == registered[u] && r.ap_id == bssid(a)) clash = true;
    }
    if (clash) continue;
    auto review = make_review("r" + std::to_string(reviews), registered[u], bssid(a), now,
                              1 + static_cast<int>(pick(5)));
    if (pick(3) != 0) {
      review.metrics = NetMetrics{-30 - static_cast<int>(pick(80)), static_cast<double>(pick(300)),
                                  static_cast<double>(pick(1000)) / 7.0,
                                  static_cast<double>(pick(1000)) / 3.0};
    }
    out.push_back(make_event(std::move(review)));
    ++reviews;
  }
  std::uint64_t seq = 0;
  for (auto& e : out) e.seq = ++seq;
  return out;
}

// Removes the directory on scope exit.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("wifiscout-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
