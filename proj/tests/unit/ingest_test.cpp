#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wifiscout/error.hpp"
#include "wifiscout/ingest.hpp"
#include "wifiscout/snapshot.hpp"

namespace {

using namespace wifiscout;

const std::string kHeader = "ssid,lat,lon,street_address,floor,room,operator\n";

// Digest of everything observable: the event stream and the exported views.
std::string digest(const AdvisoryStore& store) {
  const auto state = store.copy_state();
  return std::to_string(state.last_seq()) + "|" + export_snapshot(state);
}

TEST(Fnv1a, PublishedVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ull);
}

TEST(ExternalId, StableAndCanonicalInNumberForm) {
  // Hand-computed: FNV-1a 64 of "Wireless@SG|1.3|103.8".
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : std::string("Wireless@SG|1.3|103.8")) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  EXPECT_EQ(external_ap_id("Wireless@SG", 1.3, 103.8), std::string("ext:") + hex);
  EXPECT_EQ(external_ap_id("Wireless@SG", 1.30, 103.80), external_ap_id("Wireless@SG", 1.3, 103.8));
  EXPECT_NE(external_ap_id("Wireless@SG", 1.3, 103.8), external_ap_id("Wireless@SG", 1.3, 103.9));
  EXPECT_EQ(external_ap_id("x", 0, 0).size(), 20u);
}

TEST(ImportCsv, HeaderOnly) {
  AdvisoryStore store;
  const auto r = import_external_csv(store, kHeader, 1000);
  EXPECT_EQ(r.imported, 0u);
  EXPECT_TRUE(r.errors.empty());
  EXPECT_EQ(store.copy_state().last_seq(), 0u);
}

TEST(ImportCsv, MalformedHeader) {
  AdvisoryStore store;
  for (const std::string bad : {"", "ssid,lat,lon\n", "SSID,lat,lon,street_address,floor,room,operator\n",
                                "ssid,lat,lon,street_address,floor,room,operator,extra\n",
                                "ssid, lat,lon,street_address,floor,room,operator\n"}) {
    try {
      import_external_csv(store, bad + "a,1,2,x,,,\n", 1000);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedHeader);
    }
  }
  EXPECT_EQ(store.copy_state().last_seq(), 0u);
}

TEST(ImportCsv, TwoRowsThenIdempotentReimport) {
  AdvisoryStore store;
  const std::string csv = kHeader +
                          "Wireless@SG,1.3,103.8,1 Raffles Pl,B1,,Singtel\n"
                          "\"Cafe, Free\",1.31,103.81,\"12 \"\"Quoted\"\" Rd\",,07,\n";
  const auto first = import_external_csv(store, csv, 1000);
  EXPECT_EQ(first.imported, 2u);
  EXPECT_TRUE(first.errors.empty());

  const auto state = store.copy_state();
  const auto* ap = state.find_ap(external_ap_id("Cafe, Free", 1.31, 103.81));
  ASSERT_NE(ap, nullptr);
  EXPECT_EQ(ap->source, ApSource::kExternal);
  EXPECT_EQ(ap->bssid, std::nullopt);
  EXPECT_EQ(ap->place, (PlaceTag{"12 \"Quoted\" Rd", std::nullopt, "07"}));
  EXPECT_EQ(state.find_ap(external_ap_id("Wireless@SG", 1.3, 103.8))->place,
            (PlaceTag{"1 Raffles Pl", "B1", std::nullopt}));

  const auto before = digest(store);
  const auto second = import_external_csv(store, csv, 5000);
  EXPECT_EQ(second.imported, 0u);
  EXPECT_TRUE(second.errors.empty());
  EXPECT_EQ(digest(store), before);
}

TEST(ImportCsv, BadRowsAreReportedNotThrown) {
  AdvisoryStore store;
  const std::string csv = kHeader +
                          "ok,1.3,103.8,1 Main,,,\n"
                          "north,95,103.8,2 Main,,,\n"
                          "short,1.3,103.8\n"
                          ",1.3,103.8,3 Main,,,\n"
                          "nan,abc,103.8,4 Main,,,\n"
                          "ok,1.3,103.8,5 Other,,,\n"
                          "\"unterminated,1.3,103.8,6 Main,,,\n";
  const auto r = import_external_csv(store, csv, 1000);
  EXPECT_EQ(r.imported, 1u);
  const std::vector<RowError> expected{
      {3, "lat out of range"},
      {4, "expected 7 fields, found 3"},
      {5, "ssid is empty"},
      {6, "lat is not a number"},
      {7, "duplicate hotspot (same ssid, lat, lon) as line 2"},
  };
  ASSERT_GE(r.errors.size(), expected.size() + 1);
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(r.errors[i], expected[i]);
  EXPECT_EQ(r.errors.back().line_no, 8u);
}

TEST(ImportCsv, CrlfAndNoTrailingNewline) {
  AdvisoryStore store;
  const std::string csv = "ssid,lat,lon,street_address,floor,room,operator\r\na,1,2,x,,,\r\nb,1,2,y,,,";
  const auto r = import_external_csv(store, csv, 1000);
  EXPECT_EQ(r.imported, 2u);
  EXPECT_TRUE(r.errors.empty());
}

TEST(ImportCsv, ChangedRowUpdatesInPlace) {
  AdvisoryStore store;
  import_external_csv(store, kHeader + "a,1,2,Old St,,,\n", 1000);
  const auto r = import_external_csv(store, kHeader + "a,1,2,New St,,,\n", 2000);
  EXPECT_EQ(r.imported, 1u);
  const auto state = store.copy_state();
  EXPECT_EQ(state.ap_count(), 1u);
  EXPECT_EQ(state.find_ap(external_ap_id("a", 1, 2))->place->street_address, "New St");
  EXPECT_EQ(state.last_at(), 2000);
}

TEST(ImportCsv, StampsNeverGoBehindTheLog) {
  AdvisoryStore store;
  store.append(make_event(fixtures::make_user("u", 5000)));
  import_external_csv(store, kHeader + "a,1,2,x,,,\n", 1000);
  EXPECT_EQ(store.events().back().at, 5000);
}

class SubmitReview : public ::testing::Test {
 protected:
  void SetUp() override {
    store.append(make_event(fixtures::make_user("u1", 100)));
    store.append(make_event(fixtures::make_ap(1, 1.3, 103.8), 100));
  }
  AdvisoryStore store;
};

TEST_F(SubmitReview, FirstThenSuppressed) {
  const auto first = submit_review(store, fixtures::make_review("r1", "u1", fixtures::bssid(1), 1000, 4));
  EXPECT_EQ(first.rule_case, RuleCase::kFirstReview);
  EXPECT_EQ(first.points, 10);
  const auto again = submit_review(store, fixtures::make_review("r2", "u1", fixtures::bssid(1), 4600, 4));
  EXPECT_EQ(again.rule_case, RuleCase::kSuppressedReview);
  EXPECT_EQ(again.points, 0);
}

TEST_F(SubmitReview, UnknownApWithoutFields) {
  const auto before = store.copy_state();
  const auto events_before = store.events();
  try {
    submit_review(store, fixtures::make_review("r1", "u1", fixtures::bssid(2), 1000, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownAp);
  }
  EXPECT_EQ(store.copy_state(), before);
  EXPECT_EQ(replay(store.events(), {}), before);
  EXPECT_EQ(store.events(), events_before);
}

TEST_F(SubmitReview, NewApFieldsCreateCrowdsensedAp) {
  auto review = fixtures::make_review("r1", "u1", fixtures::bssid(2), 1000, 5);
  review.place = PlaceTag{"7 Lab Rd", "3", std::nullopt};
  const auto reward = submit_review(store, review, NewApFields{"lab", {1.29, 103.77}, std::nullopt});
  EXPECT_EQ(reward.points, 10);
  const auto state = store.copy_state();
  const auto* ap = state.find_ap(fixtures::bssid(2));
  ASSERT_NE(ap, nullptr);
  EXPECT_EQ(ap->ssid, "lab");
  EXPECT_EQ(ap->bssid, fixtures::bssid(2));
  EXPECT_EQ(ap->source, ApSource::kCrowdsensed);
  EXPECT_EQ(ap->place, review.place);
  EXPECT_EQ(state.summary(fixtures::bssid(2))->owner_user_id, "u1");
}

TEST_F(SubmitReview, FailuresAreAtomic) {
  submit_review(store, fixtures::make_review("r1", "u1", fixtures::bssid(1), 1000, 4));
  const auto before = store.copy_state();
  const auto events_before = store.events();
  struct Case {
    Review review;
    std::optional<NewApFields> fields;
    ErrorCode code;
  };
  const Case cases[] = {
      {fixtures::make_review("r2", "u1", fixtures::bssid(1), 2000, 0), std::nullopt, ErrorCode::kValidationFailed},
      {fixtures::make_review("r2", "ghost", fixtures::bssid(1), 2000, 3), std::nullopt, ErrorCode::kUnknownUser},
      {fixtures::make_review("r2", "u1", fixtures::bssid(1), 50, 3), std::nullopt, ErrorCode::kStaleTimestamp},
      {fixtures::make_review("r2", "u1", fixtures::bssid(5), 2000, 3), NewApFields{"", {1, 1}, std::nullopt},
       ErrorCode::kValidationFailed},
      {fixtures::make_review("r2", "u1", fixtures::bssid(5), 2000, 3), NewApFields{"x", {100, 1}, std::nullopt},
       ErrorCode::kValidationFailed},
      {fixtures::make_review("r2", "ghost", fixtures::bssid(5), 2000, 3), NewApFields{"x", {1, 1}, std::nullopt},
       ErrorCode::kUnknownUser},
  };
  for (const auto& c : cases) {
    try {
      submit_review(store, c.review, c.fields);
      ADD_FAILURE() << c.review.user_id;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), c.code) << e.what();
    }
    EXPECT_EQ(store.copy_state(), before);
    EXPECT_EQ(store.events(), events_before);
  }
}

}  // namespace
