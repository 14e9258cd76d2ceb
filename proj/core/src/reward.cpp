#include "wifiscout/reward.hpp"

#include <algorithm>

#include "wifiscout/error.hpp"

namespace wifiscout {

void RewardConfig::check() const {
  std::vector<std::string> violations;
  if (starting_points < 0) violations.emplace_back("starting_points is negative");
  if (full_reward <= 0 || full_reward % 2 != 0) {
    violations.emplace_back("full_reward must be a positive even integer");
  }
  if (interval_threshold_secs < 0) violations.emplace_back("interval_threshold_secs is negative");
  if (!violations.empty()) {
    throw Error(ErrorCode::kValidationFailed, "invalid reward config", std::move(violations));
  }
}

std::string_view to_string(RuleCase rule_case) {
  switch (rule_case) {
    case RuleCase::kRegistration: return "registration";
    case RuleCase::kFirstReview: return "first_review";
    case RuleCase::kSpacedReview: return "spaced_review";
    case RuleCase::kSuppressedReview: return "suppressed_review";
  }
  return "registration";
}

std::optional<RuleCase> parse_rule_case(std::string_view text) {
  for (auto c : {RuleCase::kRegistration, RuleCase::kFirstReview, RuleCase::kSpacedReview,
                 RuleCase::kSuppressedReview}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

ContributionLedger::ContributionLedger(RewardConfig config) : config_(config) { config_.check(); }

RewardEvent ContributionLedger::register_user(const UserId& user_id, Timestamp at) {
  if (users_.contains(user_id)) {
    throw Error(ErrorCode::kDuplicateUser, "user '" + user_id + "' already registered");
  }
  users_.emplace(user_id, UserEntry{config_.starting_points, at});
  return RewardEvent{"registration:" + user_id, user_id, std::nullopt, at,
                     config_.starting_points, RuleCase::kRegistration};
}

const ContributionLedger::Contribution* ContributionLedger::find_contribution(
    const UserId& user_id, const ApId& ap_id) const {
  const auto ap = contributions_.find(ap_id);
  if (ap == contributions_.end()) return nullptr;
  const auto it = ap->second.find(user_id);
  return it == ap->second.end() ? nullptr : &it->second;
}

RewardEvent ContributionLedger::preview_reward(const Review& review) const {
  if (!users_.contains(review.user_id)) {
    throw Error(ErrorCode::kUnknownUser, "user '" + review.user_id + "' is not registered");
  }
  RewardEvent event{"reward:" + review.review_id, review.user_id, review.ap_id, review.at, 0,
                    RuleCase::kFirstReview};
  const auto* prior = find_contribution(review.user_id, review.ap_id);
  if (prior == nullptr) {
    event.points = config_.full_reward;
    return event;
  }
  const auto gap = review.at - prior->last_review_at;
  if (gap < 0) {
    throw Error(ErrorCode::kNonMonotonicTimestamp,
                "review at " + std::to_string(review.at) + " precedes previous review at " +
                    std::to_string(prior->last_review_at));
  }
  if (gap >= config_.interval_threshold_secs) {
    event.points = config_.half_reward();
    event.rule_case = RuleCase::kSpacedReview;
  } else {
    event.rule_case = RuleCase::kSuppressedReview;
  }
  return event;
}

RewardEvent ContributionLedger::evaluate_reward(const Review& review) {
  auto event = preview_reward(review);
  auto& entry = contributions_[review.ap_id][review.user_id];
  entry.last_review_at = review.at;
  if (event.points > 0) {
    entry.score += event.points;
    entry.score_attained_at = review.at;
  }
  users_.at(review.user_id).total += event.points;
  return event;
}

std::vector<LeaderboardEntry> ContributionLedger::leaderboard(std::size_t n) const {
  struct Row {
    const UserId* id;
    const UserEntry* entry;
  };
  std::vector<Row> rows;
  rows.reserve(users_.size());
  for (const auto& [id, entry] : users_) rows.push_back({&id, &entry});
  const auto take = std::min(n, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end(),
                    [](const Row& a, const Row& b) {
                      if (a.entry->total != b.entry->total) return a.entry->total > b.entry->total;
                      if (a.entry->registered_at != b.entry->registered_at) {
                        return a.entry->registered_at < b.entry->registered_at;
                      }
                      return *a.id < *b.id;
                    });
  std::vector<LeaderboardEntry> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({*rows[i].id, rows[i].entry->total});
  return out;
}

std::optional<UserId> ContributionLedger::owner_of(const ApId& ap_id) const {
  const auto ap = contributions_.find(ap_id);
  if (ap == contributions_.end()) return std::nullopt;
  const UserId* best = nullptr;
  const Contribution* best_entry = nullptr;
  // Map order is ascending user_id, so strict comparisons keep the
  // lexicographically smallest id among exact ties.
  for (const auto& [user, entry] : ap->second) {
    if (entry.score <= 0) continue;
    if (best_entry == nullptr || entry.score > best_entry->score ||
        (entry.score == best_entry->score &&
         entry.score_attained_at < best_entry->score_attained_at)) {
      best = &user;
      best_entry = &entry;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

OwnershipBoard ContributionLedger::ownership_board(std::span<const ApId> ap_ids) const {
  OwnershipBoard board;
  for (const auto& ap : ap_ids) board.owner[ap] = owner_of(ap);
  return board;
}

std::optional<Points> ContributionLedger::total_points(const UserId& user_id) const {
  const auto it = users_.find(user_id);
  if (it == users_.end()) return std::nullopt;
  return it->second.total;
}

std::optional<Timestamp> ContributionLedger::registered_at(const UserId& user_id) const {
  const auto it = users_.find(user_id);
  if (it == users_.end()) return std::nullopt;
  return it->second.registered_at;
}

Points ContributionLedger::ap_score(const UserId& user_id, const ApId& ap_id) const {
  const auto* entry = find_contribution(user_id, ap_id);
  return entry == nullptr ? 0 : entry->score;
}

std::optional<Timestamp> ContributionLedger::last_review_at(const UserId& user_id,
                                                            const ApId& ap_id) const {
  const auto* entry = find_contribution(user_id, ap_id);
  if (entry == nullptr) return std::nullopt;
  return entry->last_review_at;
}

}  // namespace wifiscout
