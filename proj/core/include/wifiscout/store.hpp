#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "wifiscout/domain.hpp"
#include "wifiscout/reward.hpp"

namespace wifiscout {

enum class EventKind { kUserRegistered, kApUpserted, kReviewSubmitted };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

using EventPayload = std::variant<UserAccount, AccessPoint, Review>;

struct Event {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kUserRegistered;
  EventPayload payload;
  Timestamp at = 0;

  bool operator==(const Event&) const = default;
};

Event make_event(UserAccount user);
Event make_event(AccessPoint ap, Timestamp at);
Event make_event(Review review);

// Per-AP quality summary, the unit of region queries and snapshots.
struct ApSummary {
  AccessPoint ap;
  std::uint64_t review_count = 0;
  // Present iff review_count > 0.
  std::optional<double> mean_rating;
  std::optional<NetMetrics> latest_metrics;
  std::optional<Timestamp> latest_review_at;
  std::optional<UserId> owner_user_id;

  bool operator==(const ApSummary&) const = default;
};

// All summaries inside bbox with mean_rating >= min_rating when given.
// Sorted by mean_rating descending, unrated last, ties by ap_id. Works the
// same over live views and imported snapshots. Throws Error{kInvalidBbox}.
std::vector<ApSummary> query_region(std::span<const ApSummary> summaries, const Bbox& bbox,
                                    std::optional<double> min_rating = std::nullopt);

// Materialized state produced by applying events in order: the contribution
// ledger plus user, AP, and review views. Pure value; no locking.
class PlatformState {
 public:
  explicit PlatformState(RewardConfig config = {});

  // Throws the error apply() would throw, without changing anything.
  // `pending_ap` stands in for an AP upsert staged in the same batch.
  void check(const Event& event, const AccessPoint* pending_ap = nullptr) const;

  // Applies one event; returns the reward outcome for registrations and
  // reviews. Leaves state untouched when it throws.
  std::optional<RewardEvent> apply(const Event& event);

  const ContributionLedger& ledger() const { return ledger_; }
  const std::map<UserId, UserAccount>& users() const { return users_; }
  const AccessPoint* find_ap(const ApId& ap_id) const;
  const UserAccount* find_user(const UserId& user_id) const;
  std::size_t ap_count() const { return aps_.size(); }
  std::vector<AccessPoint> access_points() const;
  std::vector<ApId> ap_ids() const;

  // Sorted by ap_id, owners filled from the ledger.
  std::vector<ApSummary> summaries() const;
  std::vector<ApSummary> summaries_in(const Bbox& bbox) const;
  std::optional<ApSummary> summary(const ApId& ap_id) const;

  std::uint64_t last_seq() const { return last_seq_; }
  Timestamp last_at() const { return last_at_; }

  bool operator==(const PlatformState&) const = default;

 private:
  struct ApView {
    AccessPoint ap;
    std::uint64_t review_count = 0;
    std::int64_t rating_sum = 0;
    std::optional<NetMetrics> latest_metrics;
    std::optional<Timestamp> latest_review_at;
    bool operator==(const ApView&) const = default;
  };

  ApSummary summarize(const ApView& view) const;
  void check_review(const Review& review, const AccessPoint* pending_ap) const;

  ContributionLedger ledger_;
  std::map<UserId, UserAccount> users_;
  std::map<ApId, ApView> aps_;
  std::set<std::string> review_ids_;
  std::uint64_t last_seq_ = 0;
  Timestamp last_at_ = 0;
};

// Where appended events go before they become visible. The file-backed log
// implements this; in-memory stores use none.
class EventSink {
 public:
  virtual ~EventSink() = default;
  // Must be all-or-nothing per call. Throws Error{kStorageFailure}.
  virtual void write(std::span<const Event> events) = 0;
};

// Rebuilds state from an ordered event list. Throws CorruptLog on a seq gap
// or any event that fails to apply.
PlatformState replay(std::span<const Event> events, const RewardConfig& config);

struct AppendResult {
  std::uint64_t seq = 0;
  std::optional<RewardEvent> reward;
};

// Single-writer event store with concurrent readers. Each append is
// validated, written to the sink, then applied under an exclusive lock;
// readers take a shared lock and see the state as of the last completed
// append.
class AdvisoryStore {
 public:
  explicit AdvisoryStore(RewardConfig config = {}, std::shared_ptr<EventSink> sink = nullptr);

  // Starts from already-persisted events; they are not re-written.
  AdvisoryStore(RewardConfig config, std::span<const Event> history,
                std::shared_ptr<EventSink> sink);

  // Assigns the next seq and appends. Throws Error{kStaleTimestamp} if
  // event.at precedes the log head, domain errors from the payload, or
  // Error{kStorageFailure}.
  AppendResult append(Event event);

  // Appends a review. When the review's AP is not yet known and `new_ap` is
  // given, the AP is upserted first; both land or neither does.
  AppendResult append_review(const Review& review, const std::optional<AccessPoint>& new_ap);

  // Exclusive handle for batch work (CSV import): appends through it skip
  // re-locking and the batch sees no interleaved writers.
  class Writer {
   public:
    AppendResult append(Event event) { return store_.commit({std::move(event)}, nullptr); }
    const PlatformState& state() const { return store_.state_; }

   private:
    explicit Writer(AdvisoryStore& store) : store_(store) {}
    friend class AdvisoryStore;
    AdvisoryStore& store_;
  };

  template <typename Fn>
  auto exclusive(Fn&& fn) {
    std::unique_lock lock(mutex_);
    Writer writer(*this);
    return fn(writer);
  }

  // Read access under a shared lock.
  template <typename Fn>
  auto read(Fn&& fn) const {
    std::shared_lock lock(mutex_);
    return fn(state_);
  }

  PlatformState copy_state() const;
  std::vector<Event> events() const;
  const RewardConfig& config() const { return config_; }

 private:
  AppendResult commit(std::vector<Event> batch, const AccessPoint* pending_ap);

  RewardConfig config_;
  std::shared_ptr<EventSink> sink_;
  mutable std::shared_mutex mutex_;
  PlatformState state_;
  std::vector<Event> events_;
};

}  // namespace wifiscout
