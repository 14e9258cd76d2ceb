#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wifiscout/domain.hpp"

namespace wifiscout {

using Points = std::int64_t;

// Parameters of the contribution reward rules.
//
//   starting_points          granted once at registration
//   full_reward              first review of an AP by a user
//   full_reward / 2          a later review at least interval_threshold_secs
//                            after that user's previous review of the AP
//   0                        a later review sooner than that
struct RewardConfig {
  Points starting_points = 0;
  Points full_reward = 10;
  std::int64_t interval_threshold_secs = 6 * 3600;

  Points half_reward() const { return full_reward / 2; }

  // Throws Error{kValidationFailed}: negative starting points, full_reward
  // not positive and even, or a negative threshold.
  void check() const;

  bool operator==(const RewardConfig&) const = default;
};

enum class RuleCase { kRegistration, kFirstReview, kSpacedReview, kSuppressedReview };

std::string_view to_string(RuleCase rule_case);
std::optional<RuleCase> parse_rule_case(std::string_view text);

struct RewardEvent {
  std::string event_id;
  UserId user_id;
  std::optional<ApId> ap_id;
  Timestamp at = 0;
  Points points = 0;
  RuleCase rule_case = RuleCase::kRegistration;

  bool operator==(const RewardEvent&) const = default;
};

struct LeaderboardEntry {
  UserId user_id;
  Points total_points = 0;

  bool operator==(const LeaderboardEntry&) const = default;
};

struct OwnershipBoard {
  std::map<ApId, std::optional<UserId>> owner;

  bool operator==(const OwnershipBoard&) const = default;
};

// Per-user totals and per-(user, AP) review history. Not internally
// synchronized: callers serialize mutations (AdvisoryStore does).
class ContributionLedger {
 public:
  explicit ContributionLedger(RewardConfig config = {});

  const RewardConfig& config() const { return config_; }

  // Throws Error{kDuplicateUser}.
  RewardEvent register_user(const UserId& user_id, Timestamp at);

  // Classifies and records one review. Throws Error{kUnknownUser} or
  // Error{kNonMonotonicTimestamp}; on throw the ledger is unchanged.
  RewardEvent evaluate_reward(const Review& review);

  // What evaluate_reward would return, without recording anything.
  RewardEvent preview_reward(const Review& review) const;

  // Descending by total points; ties by earlier registration, then user_id.
  std::vector<LeaderboardEntry> leaderboard(std::size_t n) const;

  // Highest positive per-AP score; ties by earliest time the score was
  // reached, then user_id. Empty when nobody has earned points on the AP.
  std::optional<UserId> owner_of(const ApId& ap_id) const;

  OwnershipBoard ownership_board(std::span<const ApId> ap_ids) const;

  bool has_user(const UserId& user_id) const { return users_.contains(user_id); }
  std::optional<Points> total_points(const UserId& user_id) const;
  std::optional<Timestamp> registered_at(const UserId& user_id) const;
  Points ap_score(const UserId& user_id, const ApId& ap_id) const;
  std::optional<Timestamp> last_review_at(const UserId& user_id, const ApId& ap_id) const;
  std::size_t user_count() const { return users_.size(); }

  bool operator==(const ContributionLedger&) const = default;

 private:
  struct UserEntry {
    Points total = 0;
    Timestamp registered_at = 0;
    bool operator==(const UserEntry&) const = default;
  };
  struct Contribution {
    Timestamp last_review_at = 0;
    Points score = 0;
    Timestamp score_attained_at = 0;
    bool operator==(const Contribution&) const = default;
  };

  const Contribution* find_contribution(const UserId& user_id, const ApId& ap_id) const;

  RewardConfig config_;
  std::map<UserId, UserEntry> users_;
  // ap_id -> user_id -> history; keyed by AP so owner_of scans one AP.
  std::map<ApId, std::map<UserId, Contribution>> contributions_;
};

}  // namespace wifiscout
