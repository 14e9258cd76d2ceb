#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "wifiscout/snapshot.hpp"
#include "wifiscout/store.hpp"

namespace {

using namespace wifiscout;

PlatformState populated(std::size_t aps) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(1.2, 1.5);
  std::uniform_real_distribution<double> lon(103.6, 104.0);
  AdvisoryStore store;
  const Timestamp at = 1'700'000'000;
  store.append(make_event(UserAccount{"alice", "Alice", "a.png", at}));
  char id[18];
  for (std::size_t i = 0; i < aps; ++i) {
    std::snprintf(id, sizeof(id), "02:00:00:%02x:%02x:%02x", static_cast<unsigned>((i >> 16) & 0xFF),
                  static_cast<unsigned>((i >> 8) & 0xFF), static_cast<unsigned>(i & 0xFF));
    AccessPoint ap;
    ap.ap_id = id;
    ap.bssid = ap.ap_id;
    ap.ssid = "net " + std::to_string(i);
    ap.location = {lat(rng), lon(rng)};
    ap.place = PlaceTag{std::to_string(i) + " Main St", "2", std::nullopt};
    store.append(make_event(ap, at));
    if (i % 2 == 0) {
      Review r;
      r.review_id = "r" + std::to_string(i);
      r.user_id = "alice";
      r.ap_id = ap.ap_id;
      r.at = at;
      r.rating = 1 + static_cast<int>(i % 5);
      r.metrics = NetMetrics{-60, 72.0, 10.5, 25.25};
      store.append(make_event(r));
    }
  }
  return store.copy_state();
}

void BM_ExportSnapshot(benchmark::State& state) {
  const auto s = populated(static_cast<std::size_t>(state.range(0)));
  std::size_t bytes = 0;
  for (auto _ : state) {
    const auto out = export_snapshot(s);
    bytes = out.size();
    benchmark::DoNotOptimize(out);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_ExportSnapshot)->Range(1 << 8, 1 << 14);

void BM_ImportSnapshot(benchmark::State& state) {
  const auto bytes = export_snapshot(populated(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(import_snapshot(bytes));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes.size()));
}
BENCHMARK(BM_ImportSnapshot)->Range(1 << 8, 1 << 14);

void BM_RegionQuery(benchmark::State& state) {
  const auto summaries = populated(16384).summaries();
  const Bbox box{1.3, 103.7, 1.4, 103.9};
  for (auto _ : state) benchmark::DoNotOptimize(query_region(summaries, box, 3.0));
}
BENCHMARK(BM_RegionQuery);

}  // namespace
