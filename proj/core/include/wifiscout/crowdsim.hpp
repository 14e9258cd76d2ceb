#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wifiscout/domain.hpp"
#include "wifiscout/reward.hpp"
#include "wifiscout/store.hpp"

namespace wifiscout::sim {

inline constexpr Timestamp kDefaultStart = 1'700'000'000;
inline constexpr std::int64_t kSecondsPerDay = 86'400;

struct Scenario {
  std::uint64_t seed = 0;
  std::uint32_t n_users = 5;
  std::uint32_t n_aps = 10;
  std::uint32_t duration_days = 7;
  // Mean of the per-user, per-day Poisson review count.
  double reviews_per_user_per_day = 3.0;
  // Zipf exponent of the shared AP popularity ranking.
  double zipf_exponent = 1.0;
  // APs are placed uniformly in this box.
  Bbox geography{1.25, 103.6, 1.47, 104.0};
  Timestamp start_at = kDefaultStart;
};

// Throws Error{kValidationFailed} for a negative or non-finite rate or
// exponent, or an invalid geography box.
void check(const Scenario& scenario);

// Seeded draws built only on std::mt19937_64, whose output sequence the
// standard fixes, so streams match across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // 53 random bits scaled to [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // floor(uniform01() * n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
  }
  // Knuth's product-of-uniforms method.
  std::uint32_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

// Generated event stream. Draw order, all from one Rng(seed):
//   1. per AP i: lat, lon (uniform in geography)
//   2. popularity ranking: Fisher-Yates over AP indices, j = below(i + 1)
//      for i from n_aps - 1 down to 1
//   3. per day, per user: k = poisson(rate); per review: second of day
//      (below(86400)), popularity rank (Zipf inverse CDF on uniform01),
//      rating (1 + below(5)), metrics flag (uniform01 < 0.7) and, when set,
//      rssi (-30 - below(61)), link (1 + below(300)), up and down
//      (uniform01 * 50, uniform01 * 100)
// Reviews are then ordered by (time, user index, ap_id) and repeats of the
// same (user, AP, second) dropped.
std::vector<Event> generate_events(const Scenario& scenario);

struct CaseTally {
  std::uint64_t count = 0;
  Points points = 0;
  bool operator==(const CaseTally&) const = default;
};

struct OwnershipFlip {
  std::uint64_t seq = 0;
  ApId ap_id;
  std::optional<UserId> from;
  std::optional<UserId> to;
  bool operator==(const OwnershipFlip&) const = default;
};

struct SimReport {
  std::vector<LeaderboardEntry> leaderboard;
  // Owner changes from one user to another, per AP (first claims excluded).
  std::map<ApId, std::uint64_t> ownership_changes;
  // Every owner transition, first claims included, in seq order.
  std::vector<OwnershipFlip> flips;
  // Review outcomes only; registrations are not counted.
  std::map<RuleCase, CaseTally> reward_histogram;
  std::uint64_t event_count = 0;
  std::uint64_t review_count = 0;
  std::uint64_t user_count = 0;

  bool operator==(const SimReport&) const = default;
};

// Feeds events through registration, AP upsert, and the review pipeline of
// a fresh in-memory store, tracking owner transitions of each reviewed AP.
SimReport run_events(const std::vector<Event>& events, const RewardConfig& config,
                     AdvisoryStore* store_out = nullptr);

inline SimReport run_simulation(const Scenario& scenario, const RewardConfig& config = {}) {
  return run_events(generate_events(scenario), config);
}

// Two users contesting one AP: "alice" reviews every 12 h from hour 0, "bob"
// every 6 h from hour 25, so bob's per-AP score first exceeds alice's at
// hour 55. Bob then bursts five reviews within 40 minutes on a second AP.
// The seed only varies ratings and metrics.
std::vector<Event> overtake_script(std::uint64_t seed, Timestamp start_at = kDefaultStart);

// Deterministic JSON rendering (sorted keys, no whitespace).
std::string report_json(const SimReport& report);

}  // namespace wifiscout::sim
