#include "wifiscout/crowdsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

#include "json_codec.hpp"
#include "wifiscout/error.hpp"
#include "wifiscout/ingest.hpp"

namespace wifiscout::sim {

namespace {

constexpr double kMaxPoissonMean = 500.0;
constexpr std::uint32_t kMaxAps = 0xFFFFFF;

std::string sim_bssid(std::uint32_t index) {
  const auto n = index + 1;
  char buf[18];
  std::snprintf(buf, sizeof(buf), "02:00:00:%02x:%02x:%02x", (n >> 16) & 0xFF, (n >> 8) & 0xFF,
                n & 0xFF);
  return buf;
}

std::string sim_user(std::uint32_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "user-%04u", index);
  return buf;
}

UserAccount make_user(const std::string& id, Timestamp at) {
  return UserAccount{id, "Sim " + id, "avatar://" + id, at};
}

struct Draft {
  Timestamp at;
  std::uint32_t user;
  ApId ap_id;
  int rating;
  std::optional<NetMetrics> metrics;
};

}  // namespace

std::uint32_t Rng::poisson(double mean) {
  const double limit = std::exp(-mean);
  std::uint32_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01();
  } while (p > limit);
  return k - 1;
}

void check(const Scenario& scenario) {
  std::vector<std::string> violations;
  if (!std::isfinite(scenario.reviews_per_user_per_day) || scenario.reviews_per_user_per_day < 0.0 ||
      scenario.reviews_per_user_per_day > kMaxPoissonMean) {
    violations.emplace_back("reviews_per_user_per_day must be in [0, 500]");
  }
  if (!std::isfinite(scenario.zipf_exponent) || scenario.zipf_exponent < 0.0) {
    violations.emplace_back("zipf_exponent must be non-negative");
  }
  if (scenario.n_aps > kMaxAps) violations.emplace_back("n_aps too large");
  if (scenario.start_at <= 0) violations.emplace_back("start_at must be positive");
  try {
    check_bbox(scenario.geography);
  } catch (const Error& e) {
    violations.emplace_back(e.what());
  }
  if (!violations.empty()) {
    throw Error(ErrorCode::kValidationFailed, "invalid scenario", std::move(violations));
  }
}

std::vector<Event> generate_events(const Scenario& scenario) {
  check(scenario);
  Rng rng(scenario.seed);
  const auto& geo = scenario.geography;

  std::vector<AccessPoint> aps;
  aps.reserve(scenario.n_aps);
  for (std::uint32_t i = 0; i < scenario.n_aps; ++i) {
    const double lat = geo.min_lat + rng.uniform01() * (geo.max_lat - geo.min_lat);
    const double lon = geo.min_lon + rng.uniform01() * (geo.max_lon - geo.min_lon);
    AccessPoint ap;
    ap.ap_id = sim_bssid(i);
    ap.bssid = ap.ap_id;
    ap.ssid = "sim-ap-" + std::to_string(i);
    // A bbox edge at -180 is allowed; a point is not.
    ap.location = {lat, lon <= -180.0 ? std::nextafter(-180.0, 0.0) : lon};
    ap.place = PlaceTag{std::to_string(i + 1) + " Simulation Street", std::nullopt, std::nullopt};
    ap.source = ApSource::kCrowdsensed;
    aps.push_back(std::move(ap));
  }

  std::vector<std::uint32_t> ranking(scenario.n_aps);
  std::iota(ranking.begin(), ranking.end(), 0u);
  for (std::uint32_t i = scenario.n_aps; i-- > 1;) {
    std::swap(ranking[i], ranking[rng.below(i + 1)]);
  }

  std::vector<double> cumulative(scenario.n_aps);
  double total = 0.0;
  for (std::uint32_t r = 0; r < scenario.n_aps; ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), scenario.zipf_exponent);
    cumulative[r] = total;
  }

  std::vector<Draft> drafts;
  if (scenario.n_aps > 0) {
    for (std::uint32_t day = 0; day < scenario.duration_days; ++day) {
      for (std::uint32_t user = 0; user < scenario.n_users; ++user) {
        const auto k = rng.poisson(scenario.reviews_per_user_per_day);
        for (std::uint32_t n = 0; n < k; ++n) {
          Draft d;
          d.at = scenario.start_at + static_cast<Timestamp>(day) * kSecondsPerDay +
                 static_cast<Timestamp>(rng.below(kSecondsPerDay));
          const double target = rng.uniform01() * total;
          auto rank = static_cast<std::size_t>(
              std::upper_bound(cumulative.begin(), cumulative.end(), target) - cumulative.begin());
          rank = std::min<std::size_t>(rank, scenario.n_aps - 1);
          d.user = user;
          d.ap_id = aps[ranking[rank]].ap_id;
          d.rating = 1 + static_cast<int>(rng.below(5));
          if (rng.uniform01() < 0.7) {
            NetMetrics m;
            m.rssi_dbm = -30 - static_cast<int>(rng.below(61));
            m.link_speed_mbps = 1.0 + static_cast<double>(rng.below(300));
            m.upload_mbps = rng.uniform01() * 50.0;
            m.download_mbps = rng.uniform01() * 100.0;
            d.metrics = m;
          }
          drafts.push_back(std::move(d));
        }
      }
    }
  }

  std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    return std::tie(a.at, a.user, a.ap_id) < std::tie(b.at, b.user, b.ap_id);
  });
  drafts.erase(std::unique(drafts.begin(), drafts.end(),
                           [](const Draft& a, const Draft& b) {
                             return a.at == b.at && a.user == b.user && a.ap_id == b.ap_id;
                           }),
               drafts.end());

  std::vector<Event> events;
  events.reserve(scenario.n_users + aps.size() + drafts.size());
  for (std::uint32_t u = 0; u < scenario.n_users; ++u) {
    events.push_back(make_event(make_user(sim_user(u), scenario.start_at)));
  }
  for (auto& ap : aps) events.push_back(make_event(std::move(ap), scenario.start_at));
  std::uint64_t review_no = 0;
  for (auto& d : drafts) {
    Review r;
    r.review_id = "sim-" + std::to_string(++review_no);
    r.user_id = sim_user(d.user);
    r.ap_id = std::move(d.ap_id);
    r.at = d.at;
    r.rating = d.rating;
    r.metrics = d.metrics;
    events.push_back(make_event(std::move(r)));
  }
  std::uint64_t seq = 0;
  for (auto& e : events) e.seq = ++seq;
  return events;
}

SimReport run_events(const std::vector<Event>& events, const RewardConfig& config,
                     AdvisoryStore* store_out) {
  AdvisoryStore local(config);
  AdvisoryStore& store = store_out != nullptr ? *store_out : local;
  SimReport report;
  for (const auto& event : events) {
    if (event.kind == EventKind::kReviewSubmitted) {
      const auto& review = std::get<Review>(event.payload);
      const auto before = store.read([&](const PlatformState& s) { return s.ledger().owner_of(review.ap_id); });
      const auto reward = submit_review(store, review);
      const auto [after, seq] = store.read([&](const PlatformState& s) {
        return std::pair{s.ledger().owner_of(review.ap_id), s.last_seq()};
      });
      auto& tally = report.reward_histogram[reward.rule_case];
      ++tally.count;
      tally.points += reward.points;
      ++report.review_count;
      if (after != before) {
        report.flips.push_back({seq, review.ap_id, before, after});
        if (before) ++report.ownership_changes[review.ap_id];
      }
    } else {
      store.append(event);
    }
    ++report.event_count;
  }
  store.read([&](const PlatformState& s) {
    report.user_count = s.ledger().user_count();
    report.leaderboard = s.ledger().leaderboard(s.ledger().user_count());
    for (const auto& id : s.ap_ids()) report.ownership_changes.try_emplace(id, 0);
    return 0;
  });
  return report;
}

std::vector<Event> overtake_script(std::uint64_t seed, Timestamp start_at) {
  constexpr std::int64_t kHour = 3600;
  const ApId contested = "02:00:00:00:00:01";
  const ApId side = "02:00:00:00:00:02";
  Rng rng(seed);

  std::vector<Event> events;
  events.push_back(make_event(make_user("alice", start_at)));
  events.push_back(make_event(make_user("bob", start_at)));
  auto add_ap = [&](const ApId& id, const char* ssid, double lat, double lon) {
    AccessPoint ap;
    ap.ap_id = id;
    ap.bssid = id;
    ap.ssid = ssid;
    ap.location = {lat, lon};
    ap.place = PlaceTag{"1 Contest Plaza", "2", std::nullopt};
    events.push_back(make_event(std::move(ap), start_at));
  };
  add_ap(contested, "plaza-wifi", 1.3521, 103.8198);
  add_ap(side, "corner-cafe", 1.3530, 103.8210);

  struct Step {
    std::int64_t at;
    const char* user;
    const ApId* ap;
  };
  std::vector<Step> steps;
  for (std::int64_t h = 0; h <= 60; h += 12) steps.push_back({h * kHour, "alice", &contested});
  for (std::int64_t h = 25; h <= 67; h += 6) steps.push_back({h * kHour, "bob", &contested});
  for (std::int64_t m = 0; m <= 40; m += 10) steps.push_back({70 * kHour + m * 60, "bob", &side});
  std::stable_sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) { return a.at < b.at; });

  std::uint64_t n = 0;
  for (const auto& step : steps) {
    Review r;
    r.review_id = "script-" + std::to_string(++n);
    r.user_id = step.user;
    r.ap_id = *step.ap;
    r.at = start_at + step.at;
    r.rating = 1 + static_cast<int>(rng.below(5));
    r.metrics = NetMetrics{-40 - static_cast<int>(rng.below(40)), 72.0, rng.uniform01() * 20.0,
                           rng.uniform01() * 40.0};
    events.push_back(make_event(std::move(r)));
  }
  std::uint64_t seq = 0;
  for (auto& e : events) e.seq = ++seq;
  return events;
}

std::string report_json(const SimReport& report) {
  using codec::json;
  json leaderboard = json::array();
  for (const auto& e : report.leaderboard) {
    leaderboard.push_back({{"user_id", e.user_id}, {"total_points", e.total_points}});
  }
  json flips = json::array();
  for (const auto& f : report.flips) {
    json j{{"seq", f.seq}, {"ap_id", f.ap_id}};
    j["from"] = f.from ? json(*f.from) : json(nullptr);
    j["to"] = f.to ? json(*f.to) : json(nullptr);
    flips.push_back(std::move(j));
  }
  json histogram = json::object();
  for (auto c : {RuleCase::kFirstReview, RuleCase::kSpacedReview, RuleCase::kSuppressedReview}) {
    const auto it = report.reward_histogram.find(c);
    const auto tally = it == report.reward_histogram.end() ? CaseTally{} : it->second;
    histogram[std::string(to_string(c))] = {{"count", tally.count}, {"points", tally.points}};
  }
  json changes = json::object();
  for (const auto& [ap, n] : report.ownership_changes) changes[ap] = n;
  json out{{"leaderboard", std::move(leaderboard)},
           {"ownership_changes", std::move(changes)},
           {"ownership_flips", std::move(flips)},
           {"reward_histogram", std::move(histogram)},
           {"event_count", report.event_count},
           {"review_count", report.review_count},
           {"user_count", report.user_count}};
  return out.dump();
}

}  // namespace wifiscout::sim
