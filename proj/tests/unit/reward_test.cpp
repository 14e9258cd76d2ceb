#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wifiscout/error.hpp"
#include "wifiscout/reward.hpp"

namespace {

using namespace wifiscout;

constexpr std::int64_t kT = 21600;
const ApId kAp = "aa:bb:cc:dd:ee:01";
const ApId kOtherAp = "aa:bb:cc:dd:ee:02";

Review review_at(const UserId& user, const ApId& ap, Timestamp at) {
  static int n = 0;
  return fixtures::make_review("rv" + std::to_string(++n), user, ap, at, 4);
}

TEST(RewardConfig, Defaults) {
  const RewardConfig c;
  EXPECT_EQ(c.starting_points, 0);
  EXPECT_EQ(c.full_reward, 10);
  EXPECT_EQ(c.half_reward(), 5);
  EXPECT_EQ(c.interval_threshold_secs, 21600);
  EXPECT_NO_THROW(c.check());
}

TEST(RewardConfig, RejectsBadValues) {
  for (const auto& bad : {RewardConfig{-1, 10, kT}, RewardConfig{0, 0, kT}, RewardConfig{0, 7, kT},
                          RewardConfig{0, -10, kT}, RewardConfig{0, 10, -1}}) {
    try {
      bad.check();
      ADD_FAILURE() << "accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kValidationFailed);
    }
    EXPECT_THROW(ContributionLedger{bad}, Error);
  }
  EXPECT_NO_THROW((RewardConfig{0, 10, 0}.check()));
}

TEST(RuleCase, NamesRoundTrip) {
  for (auto c : {RuleCase::kRegistration, RuleCase::kFirstReview, RuleCase::kSpacedReview,
                 RuleCase::kSuppressedReview}) {
    EXPECT_EQ(parse_rule_case(to_string(c)), c);
  }
  EXPECT_EQ(parse_rule_case("bonus"), std::nullopt);
}

TEST(Reward, CaseTable) {
  ContributionLedger ledger;
  const auto reg = ledger.register_user("alice", 0);
  EXPECT_EQ(reg, (RewardEvent{"registration:alice", "alice", std::nullopt, 0, 0, RuleCase::kRegistration}));

  const Timestamp t0 = 1000;
  struct Row {
    Timestamp at;
    Points points;
    RuleCase rule_case;
  };
  // Each gap is measured from the review directly before it.
  const Row rows[] = {
      {t0, 10, RuleCase::kFirstReview},
      {t0 + kT, 5, RuleCase::kSpacedReview},
      {t0 + kT + (kT - 1), 0, RuleCase::kSuppressedReview},
      {t0 + kT + (kT - 1) + (kT + 1), 5, RuleCase::kSpacedReview},
  };
  Points total = 0;
  for (const auto& row : rows) {
    const auto r = review_at("alice", kAp, row.at);
    const auto e = ledger.evaluate_reward(r);
    EXPECT_EQ(e.points, row.points) << row.at;
    EXPECT_EQ(e.rule_case, row.rule_case) << row.at;
    EXPECT_EQ(e.event_id, "reward:" + r.review_id);
    EXPECT_EQ(e.ap_id, kAp);
    EXPECT_EQ(e.at, row.at);
    total += row.points;
  }
  EXPECT_EQ(ledger.total_points("alice"), total);
  EXPECT_EQ(ledger.ap_score("alice", kAp), 20);
}

TEST(Reward, SuppressedReviewStillMovesTheWindow) {
  ContributionLedger ledger;
  ledger.register_user("alice", 0);
  EXPECT_EQ(ledger.evaluate_reward(review_at("alice", kAp, 100)).points, 10);
  EXPECT_EQ(ledger.evaluate_reward(review_at("alice", kAp, 100 + kT - 1)).points, 0);
  // T + 5 after the first review but only 6 s after the suppressed one.
  EXPECT_EQ(ledger.evaluate_reward(review_at("alice", kAp, 100 + kT + 5)).points, 0);
  EXPECT_EQ(ledger.last_review_at("alice", kAp), 100 + kT + 5);
}

TEST(Reward, SameSecondRepeatIsSuppressed) {
  ContributionLedger ledger;
  ledger.register_user("alice", 0);
  ledger.evaluate_reward(review_at("alice", kAp, 50));
  const auto e = ledger.evaluate_reward(review_at("alice", kAp, 50));
  EXPECT_EQ(e.points, 0);
  EXPECT_EQ(e.rule_case, RuleCase::kSuppressedReview);
}

TEST(Reward, PairsAreIndependent) {
  ContributionLedger ledger;
  ledger.register_user("alice", 0);
  ledger.register_user("bob", 0);
  EXPECT_EQ(ledger.evaluate_reward(review_at("alice", kAp, 10)).points, 10);
  EXPECT_EQ(ledger.evaluate_reward(review_at("alice", kOtherAp, 11)).points, 10);
  EXPECT_EQ(ledger.evaluate_reward(review_at("bob", kAp, 12)).points, 10);
  EXPECT_EQ(ledger.total_points("alice"), 20);
  EXPECT_EQ(ledger.total_points("bob"), 10);
}

TEST(Reward, StartingPoints) {
  ContributionLedger ledger(RewardConfig{25, 10, kT});
  EXPECT_EQ(ledger.register_user("alice", 5).points, 25);
  EXPECT_EQ(ledger.total_points("alice"), 25);
  ledger.evaluate_reward(review_at("alice", kAp, 10));
  EXPECT_EQ(ledger.total_points("alice"), 35);
  // Starting points are not per-AP score.
  EXPECT_EQ(ledger.ap_score("alice", kAp), 10);
}

TEST(Reward, ErrorsLeaveLedgerUnchanged) {
  ContributionLedger ledger;
  ledger.register_user("alice", 0);
  ledger.evaluate_reward(review_at("alice", kAp, 1000));
  const auto before = ledger;

  try {
    ledger.register_user("alice", 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateUser);
  }
  try {
    ledger.evaluate_reward(review_at("mallory", kAp, 2000));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownUser);
  }
  try {
    ledger.evaluate_reward(review_at("alice", kAp, 999));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonMonotonicTimestamp);
  }
  EXPECT_EQ(ledger, before);
}

TEST(Reward, PreviewDoesNotRecord) {
  ContributionLedger ledger;
  ledger.register_user("alice", 0);
  const auto r = review_at("alice", kAp, 1000);
  const auto before = ledger;
  const auto preview = ledger.preview_reward(r);
  EXPECT_EQ(ledger, before);
  EXPECT_EQ(ledger.evaluate_reward(r), preview);
}

TEST(Leaderboard, OrdersByPointsThenRegistrationThenId) {
  ContributionLedger ledger;
  ledger.register_user("carol", 30);
  ledger.register_user("bob", 10);
  ledger.register_user("alice", 10);
  ledger.register_user("dave", 5);
  ledger.evaluate_reward(review_at("carol", kAp, 100));
  ledger.evaluate_reward(review_at("alice", kOtherAp, 101));
  ledger.evaluate_reward(review_at("bob", kOtherAp, 102));

  const std::vector<LeaderboardEntry> expected{{"alice", 10}, {"bob", 10}, {"carol", 10}, {"dave", 0}};
  EXPECT_EQ(ledger.leaderboard(10), expected);
  EXPECT_EQ(ledger.leaderboard(2), (std::vector<LeaderboardEntry>{{"alice", 10}, {"bob", 10}}));
  EXPECT_TRUE(ledger.leaderboard(0).empty());
}

TEST(Ownership, NobodyBeforeAnyReview) {
  ContributionLedger ledger;
  ledger.register_user("alice", 0);
  EXPECT_EQ(ledger.owner_of(kAp), std::nullopt);
}

TEST(Ownership, HighestScoreWins) {
  ContributionLedger ledger;
  ledger.register_user("alice", 0);
  ledger.register_user("bob", 0);
  ledger.evaluate_reward(review_at("alice", kAp, 100));
  EXPECT_EQ(ledger.owner_of(kAp), "alice");
  ledger.evaluate_reward(review_at("bob", kAp, 200));
  // 10 vs 10: alice reached it first.
  EXPECT_EQ(ledger.owner_of(kAp), "alice");
  ledger.evaluate_reward(review_at("bob", kAp, 200 + kT));
  EXPECT_EQ(ledger.owner_of(kAp), "bob");
  ledger.evaluate_reward(review_at("alice", kAp, 300 + kT));
  // 15 vs 15: bob reached 15 at 200 + T, alice at 300 + T.
  EXPECT_EQ(ledger.owner_of(kAp), "bob");
}

TEST(Ownership, ExactTieGoesToSmallestId) {
  ContributionLedger ledger;
  ledger.register_user("zed", 0);
  ledger.register_user("amy", 0);
  ledger.evaluate_reward(review_at("zed", kAp, 100));
  ledger.evaluate_reward(review_at("amy", kAp, 100));
  EXPECT_EQ(ledger.owner_of(kAp), "amy");
}

TEST(Ownership, SuppressedReviewDoesNotRefreshAttainment) {
  ContributionLedger ledger;
  ledger.register_user("alice", 0);
  ledger.register_user("bob", 0);
  ledger.evaluate_reward(review_at("alice", kAp, 100));
  ledger.evaluate_reward(review_at("bob", kAp, 200));
  // alice's zero-point review leaves her score reached at 100.
  ledger.evaluate_reward(review_at("alice", kAp, 300));
  EXPECT_EQ(ledger.owner_of(kAp), "alice");
}

TEST(Ownership, Board) {
  ContributionLedger ledger;
  ledger.register_user("alice", 0);
  ledger.evaluate_reward(review_at("alice", kAp, 100));
  const std::vector<ApId> ids{kAp, kOtherAp};
  OwnershipBoard expected;
  expected.owner[kAp] = "alice";
  expected.owner[kOtherAp] = std::nullopt;
  EXPECT_EQ(ledger.ownership_board(ids), expected);
}

// Feeds a store-level event stream to a bare ledger and the oracle.
struct Replayed {
  ContributionLedger ledger;
  oracle::RewardHistory history;
  std::vector<RewardEvent> outcomes;
};

Replayed feed(const std::vector<Event>& events, const RewardConfig& config) {
  Replayed out{ContributionLedger(config),
               oracle::RewardHistory({config.starting_points, config.full_reward,
                                      config.interval_threshold_secs}),
               {}};
  for (const auto& e : events) {
    if (const auto* u = std::get_if<UserAccount>(&e.payload)) {
      out.outcomes.push_back(out.ledger.register_user(u->user_id, u->registered_at));
      out.history.register_user(u->user_id, u->registered_at);
    } else if (const auto* r = std::get_if<Review>(&e.payload)) {
      out.outcomes.push_back(out.ledger.evaluate_reward(*r));
      out.history.review(r->user_id, r->ap_id, r->at);
    }
  }
  return out;
}

fixtures::StreamSpec small_spec(std::mt19937_64& rng, std::int64_t threshold) {
  fixtures::StreamSpec spec;
  spec.users = 1 + rng() % 6;
  spec.aps = 1 + rng() % 5;
  spec.reviews = rng() % 120;
  spec.threshold = threshold;
  return spec;
}

TEST(RewardProperty, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const RewardConfig config{static_cast<Points>(rng() % 3) * 5, 10, kT};
    const auto spec = small_spec(rng, kT);
    const auto events = fixtures::random_stream(spec, rng);
    const auto run = feed(events, config);
    for (std::size_t u = 0; u < spec.users; ++u) {
      const auto user = fixtures::user_name(u);
      ASSERT_EQ(run.ledger.total_points(user), run.history.total(user)) << trial;
      for (std::size_t a = 0; a < spec.aps; ++a) {
        ASSERT_EQ(run.ledger.ap_score(user, fixtures::bssid(a)),
                  run.history.ap_score(user, fixtures::bssid(a)));
      }
    }
    for (std::size_t a = 0; a < spec.aps; ++a) {
      ASSERT_EQ(run.ledger.owner_of(fixtures::bssid(a)), run.history.owner(fixtures::bssid(a))) << trial;
    }
    const auto board = run.ledger.leaderboard(spec.users);
    const auto expected = run.history.leaderboard();
    ASSERT_EQ(board.size(), expected.size());
    for (std::size_t i = 0; i < board.size(); ++i) {
      EXPECT_EQ(board[i].user_id, expected[i].first);
      EXPECT_EQ(board[i].total_points, expected[i].second);
    }
  }
}

TEST(RewardProperty, Conservation) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const RewardConfig config{static_cast<Points>(rng() % 20), 2 * static_cast<Points>(1 + rng() % 10),
                              static_cast<std::int64_t>(rng() % (2 * kT))};
    const auto spec = small_spec(rng, config.interval_threshold_secs);
    const auto run = feed(fixtures::random_stream(spec, rng), config);
    Points review_points = 0;
    for (const auto& e : run.outcomes) {
      if (e.rule_case != RuleCase::kRegistration) review_points += e.points;
    }
    Points sum_totals = 0;
    for (const auto& row : run.ledger.leaderboard(run.ledger.user_count())) sum_totals += row.total_points;
    EXPECT_EQ(sum_totals,
              static_cast<Points>(run.ledger.user_count()) * config.starting_points + review_points);
  }
}

TEST(RewardProperty, TotalsNeverDecrease) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = small_spec(rng, kT);
    const auto events = fixtures::random_stream(spec, rng);
    ContributionLedger ledger;
    std::map<UserId, Points> last;
    for (const auto& e : events) {
      if (const auto* u = std::get_if<UserAccount>(&e.payload)) {
        ledger.register_user(u->user_id, u->registered_at);
      } else if (const auto* r = std::get_if<Review>(&e.payload)) {
        const auto out = ledger.evaluate_reward(*r);
        EXPECT_GE(out.points, 0);
        const auto now = *ledger.total_points(r->user_id);
        EXPECT_GE(now, last[r->user_id]);
        last[r->user_id] = now;
      }
    }
  }
}

TEST(RewardProperty, ZeroWindow) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = small_spec(rng, kT);
    const auto events = fixtures::random_stream(spec, rng);
    ContributionLedger ledger;
    std::map<std::pair<UserId, ApId>, Timestamp> previous;
    for (const auto& e : events) {
      if (const auto* u = std::get_if<UserAccount>(&e.payload)) {
        ledger.register_user(u->user_id, u->registered_at);
      } else if (const auto* r = std::get_if<Review>(&e.payload)) {
        const auto out = ledger.evaluate_reward(*r);
        const auto key = std::pair{r->user_id, r->ap_id};
        const auto it = previous.find(key);
        if (it != previous.end() && r->at - it->second < kT) {
          EXPECT_EQ(out.points, 0);
          EXPECT_EQ(out.rule_case, RuleCase::kSuppressedReview);
        } else {
          EXPECT_GT(out.points, 0);
        }
        previous[key] = r->at;
      }
    }
  }
}

TEST(RewardProperty, ScalingRewardScalesPointsAndKeepsOwners) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = small_spec(rng, kT);
    const auto events = fixtures::random_stream(spec, rng);
    const Points k = 1 + static_cast<Points>(rng() % 7);
    const auto base = feed(events, RewardConfig{0, 10, kT});
    const auto scaled = feed(events, RewardConfig{0, 10 * k, kT});
    ASSERT_EQ(base.outcomes.size(), scaled.outcomes.size());
    for (std::size_t i = 0; i < base.outcomes.size(); ++i) {
      EXPECT_EQ(scaled.outcomes[i].points, k * base.outcomes[i].points);
      EXPECT_EQ(scaled.outcomes[i].rule_case, base.outcomes[i].rule_case);
    }
    for (std::size_t a = 0; a < spec.aps; ++a) {
      EXPECT_EQ(base.ledger.owner_of(fixtures::bssid(a)), scaled.ledger.owner_of(fixtures::bssid(a)));
    }
  }
}

TEST(RewardProperty, ZeroThresholdNeverSuppresses) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = small_spec(rng, kT);
    const auto run = feed(fixtures::random_stream(spec, rng), RewardConfig{0, 10, 0});
    for (const auto& e : run.outcomes) EXPECT_NE(e.rule_case, RuleCase::kSuppressedReview);
  }
}

}  // namespace
