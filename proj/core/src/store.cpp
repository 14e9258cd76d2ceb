#include "wifiscout/store.hpp"

#include <algorithm>
#include <mutex>

#include "wifiscout/error.hpp"

namespace wifiscout {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kUserRegistered: return "user_registered";
    case EventKind::kApUpserted: return "ap_upserted";
    case EventKind::kReviewSubmitted: return "review_submitted";
  }
  return "user_registered";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (auto k : {EventKind::kUserRegistered, EventKind::kApUpserted, EventKind::kReviewSubmitted}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

Event make_event(UserAccount user) {
  const auto at = user.registered_at;
  return Event{0, EventKind::kUserRegistered, std::move(user), at};
}

Event make_event(AccessPoint ap, Timestamp at) {
  return Event{0, EventKind::kApUpserted, std::move(ap), at};
}

Event make_event(Review review) {
  const auto at = review.at;
  return Event{0, EventKind::kReviewSubmitted, std::move(review), at};
}

std::vector<ApSummary> query_region(std::span<const ApSummary> summaries, const Bbox& bbox,
                                    std::optional<double> min_rating) {
  check_bbox(bbox);
  std::vector<ApSummary> out;
  for (const auto& s : summaries) {
    if (!bbox.contains(s.ap.location)) continue;
    if (min_rating && !(s.mean_rating && *s.mean_rating >= *min_rating)) continue;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const ApSummary& a, const ApSummary& b) {
    if (a.mean_rating.has_value() != b.mean_rating.has_value()) return a.mean_rating.has_value();
    if (a.mean_rating && *a.mean_rating != *b.mean_rating) return *a.mean_rating > *b.mean_rating;
    return a.ap.ap_id < b.ap.ap_id;
  });
  return out;
}

// ---------------------------------------------------------------------------
// PlatformState

PlatformState::PlatformState(RewardConfig config) : ledger_(config) {}

const AccessPoint* PlatformState::find_ap(const ApId& ap_id) const {
  const auto it = aps_.find(ap_id);
  return it == aps_.end() ? nullptr : &it->second.ap;
}

const UserAccount* PlatformState::find_user(const UserId& user_id) const {
  const auto it = users_.find(user_id);
  return it == users_.end() ? nullptr : &it->second;
}

std::vector<AccessPoint> PlatformState::access_points() const {
  std::vector<AccessPoint> out;
  out.reserve(aps_.size());
  for (const auto& [id, view] : aps_) out.push_back(view.ap);
  return out;
}

std::vector<ApId> PlatformState::ap_ids() const {
  std::vector<ApId> out;
  out.reserve(aps_.size());
  for (const auto& [id, view] : aps_) out.push_back(id);
  return out;
}

ApSummary PlatformState::summarize(const ApView& view) const {
  ApSummary s;
  s.ap = view.ap;
  s.review_count = view.review_count;
  if (view.review_count > 0) {
    s.mean_rating = static_cast<double>(view.rating_sum) / static_cast<double>(view.review_count);
  }
  s.latest_metrics = view.latest_metrics;
  s.latest_review_at = view.latest_review_at;
  s.owner_user_id = ledger_.owner_of(view.ap.ap_id);
  return s;
}

std::vector<ApSummary> PlatformState::summaries() const {
  std::vector<ApSummary> out;
  out.reserve(aps_.size());
  for (const auto& [id, view] : aps_) out.push_back(summarize(view));
  return out;
}

std::vector<ApSummary> PlatformState::summaries_in(const Bbox& bbox) const {
  std::vector<ApSummary> out;
  for (const auto& [id, view] : aps_) {
    if (bbox.contains(view.ap.location)) out.push_back(summarize(view));
  }
  return out;
}

std::optional<ApSummary> PlatformState::summary(const ApId& ap_id) const {
  const auto it = aps_.find(ap_id);
  if (it == aps_.end()) return std::nullopt;
  return summarize(it->second);
}

void PlatformState::check_review(const Review& review, const AccessPoint* pending_ap) const {
  validate_review(review);
  const auto* user = find_user(review.user_id);
  if (user == nullptr) {
    throw Error(ErrorCode::kUnknownUser, "user '" + review.user_id + "' is not registered");
  }
  const bool ap_known =
      aps_.contains(review.ap_id) || (pending_ap != nullptr && pending_ap->ap_id == review.ap_id);
  if (!ap_known) {
    throw Error(ErrorCode::kUnknownAp, "access point '" + review.ap_id + "' is unknown");
  }
  std::vector<std::string> violations;
  if (review.at < user->registered_at) {
    violations.emplace_back("review precedes the user's registration");
  }
  if (review_ids_.contains(review.review_id)) {
    violations.emplace_back("review_id '" + review.review_id + "' already used");
  }
  if (const auto last = ledger_.last_review_at(review.user_id, review.ap_id);
      last && *last == review.at) {
    violations.emplace_back("duplicate review for (user_id, ap_id, at)");
  }
  if (!violations.empty()) {
    throw Error(ErrorCode::kValidationFailed, "review failed validation", std::move(violations));
  }
  // Surfaces NonMonotonicTimestamp.
  ledger_.preview_reward(review);
}

void PlatformState::check(const Event& event, const AccessPoint* pending_ap) const {
  if (event.at < last_at_) {
    throw Error(ErrorCode::kStaleTimestamp, "event at " + std::to_string(event.at) +
                                                " precedes log head at " + std::to_string(last_at_));
  }
  switch (event.kind) {
    case EventKind::kUserRegistered: {
      const auto* user = std::get_if<UserAccount>(&event.payload);
      if (user == nullptr) throw Error(ErrorCode::kInternal, "user_registered without UserAccount");
      if (auto v = user_violations(*user); !v.empty()) {
        throw Error(ErrorCode::kValidationFailed, "user failed validation", std::move(v));
      }
      if (user->registered_at != event.at) {
        throw Error(ErrorCode::kValidationFailed, "registration event time differs from registered_at");
      }
      if (users_.contains(user->user_id)) {
        throw Error(ErrorCode::kDuplicateUser, "user '" + user->user_id + "' already registered");
      }
      return;
    }
    case EventKind::kApUpserted: {
      const auto* ap = std::get_if<AccessPoint>(&event.payload);
      if (ap == nullptr) throw Error(ErrorCode::kInternal, "ap_upserted without AccessPoint");
      if (auto v = access_point_violations(*ap); !v.empty()) {
        throw Error(ErrorCode::kValidationFailed, "access point failed validation", std::move(v));
      }
      return;
    }
    case EventKind::kReviewSubmitted: {
      const auto* review = std::get_if<Review>(&event.payload);
      if (review == nullptr) throw Error(ErrorCode::kInternal, "review_submitted without Review");
      if (review->at != event.at) {
        throw Error(ErrorCode::kValidationFailed, "review event time differs from review.at");
      }
      check_review(*review, pending_ap);
      return;
    }
  }
}

std::optional<RewardEvent> PlatformState::apply(const Event& event) {
  if (event.seq != last_seq_ + 1) {
    throw Error(ErrorCode::kCorruptLog, "expected seq " + std::to_string(last_seq_ + 1) + ", got " +
                                            std::to_string(event.seq));
  }
  check(event);
  std::optional<RewardEvent> reward;
  switch (event.kind) {
    case EventKind::kUserRegistered: {
      const auto& user = std::get<UserAccount>(event.payload);
      reward = ledger_.register_user(user.user_id, user.registered_at);
      users_.emplace(user.user_id, user);
      break;
    }
    case EventKind::kApUpserted: {
      const auto& ap = std::get<AccessPoint>(event.payload);
      aps_[ap.ap_id].ap = ap;
      break;
    }
    case EventKind::kReviewSubmitted: {
      const auto& review = std::get<Review>(event.payload);
      reward = ledger_.evaluate_reward(review);
      auto& view = aps_.at(review.ap_id);
      ++view.review_count;
      view.rating_sum += review.rating;
      view.latest_review_at = review.at;
      if (review.metrics) view.latest_metrics = review.metrics;
      review_ids_.insert(review.review_id);
      break;
    }
  }
  last_seq_ = event.seq;
  last_at_ = event.at;
  return reward;
}

PlatformState replay(std::span<const Event> events, const RewardConfig& config) {
  PlatformState state(config);
  for (const auto& event : events) {
    try {
      state.apply(event);
    } catch (const CorruptLog&) {
      throw;
    } catch (const Error& e) {
      throw CorruptLog(event.seq, e.what());
    }
  }
  return state;
}

// ---------------------------------------------------------------------------
// AdvisoryStore

AdvisoryStore::AdvisoryStore(RewardConfig config, std::shared_ptr<EventSink> sink)
    : config_(config), sink_(std::move(sink)), state_(config) {}

AdvisoryStore::AdvisoryStore(RewardConfig config, std::span<const Event> history,
                             std::shared_ptr<EventSink> sink)
    : config_(config),
      sink_(std::move(sink)),
      state_(replay(history, config)),
      events_(history.begin(), history.end()) {}

AppendResult AdvisoryStore::commit(std::vector<Event> batch, const AccessPoint* pending_ap) {
  auto seq = state_.last_seq();
  Timestamp head = state_.last_at();
  for (auto& event : batch) {
    event.seq = ++seq;
    if (event.at < head) {
      throw Error(ErrorCode::kStaleTimestamp, "event at " + std::to_string(event.at) +
                                                  " precedes log head at " + std::to_string(head));
    }
    head = event.at;
    // Only the final event of a batch may depend on the staged AP.
    state_.check(event, event.kind == EventKind::kReviewSubmitted ? pending_ap : nullptr);
  }
  if (sink_) sink_->write(batch);
  AppendResult result;
  for (auto& event : batch) {
    result.seq = event.seq;
    result.reward = state_.apply(event);
    events_.push_back(std::move(event));
  }
  return result;
}

AppendResult AdvisoryStore::append(Event event) {
  std::unique_lock lock(mutex_);
  std::vector<Event> batch;
  batch.push_back(std::move(event));
  return commit(std::move(batch), nullptr);
}

AppendResult AdvisoryStore::append_review(const Review& review,
                                          const std::optional<AccessPoint>& new_ap) {
  std::unique_lock lock(mutex_);
  std::vector<Event> batch;
  const bool create = new_ap && state_.find_ap(review.ap_id) == nullptr;
  if (create) {
    if (new_ap->ap_id != review.ap_id) {
      throw Error(ErrorCode::kValidationFailed, "new access point id differs from review ap_id");
    }
    batch.push_back(make_event(*new_ap, review.at));
  }
  batch.push_back(make_event(review));
  return commit(std::move(batch), create ? &*new_ap : nullptr);
}

PlatformState AdvisoryStore::copy_state() const {
  std::shared_lock lock(mutex_);
  return state_;
}

std::vector<Event> AdvisoryStore::events() const {
  std::shared_lock lock(mutex_);
  return events_;
}

}  // namespace wifiscout
