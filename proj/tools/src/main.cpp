#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>

#include "http_server.hpp"
#include "wifiscout/api.hpp"
#include "wifiscout/config.hpp"
#include "wifiscout/crowdsim.hpp"
#include "wifiscout/error.hpp"
#include "wifiscout/event_log.hpp"
#include "wifiscout/ingest.hpp"

namespace {

namespace fs = std::filesystem;
using namespace wifiscout;

constexpr int kExitMalformedHeader = 2;

http::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

ServiceConfig resolve_config(const std::string& config_path, std::optional<int> port,
                             const std::string& data_dir) {
  ServiceConfig config = config_path.empty() ? ServiceConfig{} : load_config(config_path);
  if (port) config.port = *port;
  if (!data_dir.empty()) config.data_dir = data_dir;
  return config;
}

struct OpenedStore {
  std::shared_ptr<FileEventLog> log;
  std::unique_ptr<AdvisoryStore> store;
};

OpenedStore open_store(const ServiceConfig& config) {
  fs::create_directories(config.data_dir);
  const auto path = fs::path(config.data_dir) / "events.log";
  const auto history = read_event_log(path);
  OpenedStore opened;
  opened.log = std::make_shared<FileEventLog>(path, config.fsync_batch);
  opened.store = std::make_unique<AdvisoryStore>(config.reward, history, opened.log);
  return opened;
}

int run_serve(const ServiceConfig& config, const std::string& host) {
  auto opened = open_store(config);
  const auto events = opened.store->read([](const PlatformState& s) { return s.last_seq(); });
  api::Service service(*opened.store, config);
  http::Server server(service);
  const int port = server.bind(host, config.port);
  std::cerr << "wifiscout: " << events << " events replayed; listening on " << host << ':' << port
            << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  return 0;
}

int run_import(const ServiceConfig& config, const std::string& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) {
    std::cerr << "wifiscout: cannot read " << csv_path << '\n';
    return 1;
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto opened = open_store(config);
  try {
    const auto result = import_external_csv(*opened.store, bytes, api::system_clock_seconds());
    opened.log->sync();
    for (const auto& e : result.errors) std::cerr << csv_path << ':' << e.line_no << ": " << e.reason << '\n';
    std::cout << "imported=" << result.imported << " errors=" << result.errors.size() << '\n';
  } catch (const Error& e) {
    std::cerr << "wifiscout: " << e.what() << '\n';
    return e.code() == ErrorCode::kMalformedHeader ? kExitMalformedHeader : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wifiscout: crowdsensed WiFi advisory platform"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_dir;
  std::optional<int> port;
  std::string host = "0.0.0.0";

  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON API");
  serve->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  serve->add_option("--port", port, "Listen port (0 picks a free one)");
  serve->add_option("--data-dir", data_dir, "Directory holding events.log");
  serve->add_option("--host", host, "Listen address");

  std::string csv_path;
  auto* import = app.add_subcommand("import", "Import an external hotspot CSV");
  import->add_option("csv", csv_path, "CSV file")->required();
  import->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  import->add_option("--data-dir", data_dir, "Directory holding events.log");

  sim::Scenario scenario;
  std::string script;
  std::string log_path;
  std::optional<std::int64_t> threshold;
  auto* simulate = app.add_subcommand("simulate", "Run a seeded synthetic crowd and print a JSON report");
  simulate->add_option("--seed", scenario.seed, "RNG seed");
  simulate->add_option("--users", scenario.n_users, "Number of users");
  simulate->add_option("--aps", scenario.n_aps, "Number of access points");
  simulate->add_option("--days", scenario.duration_days, "Simulated days");
  simulate->add_option("--rate", scenario.reviews_per_user_per_day, "Mean reviews per user per day");
  simulate->add_option("--zipf", scenario.zipf_exponent, "Zipf exponent of AP popularity");
  simulate->add_option("--script", script, "Built-in scripted scenario instead of random")
      ->check(CLI::IsMember({"overtake"}));
  simulate->add_option("--log", log_path, "Also write the event stream as a replayable log");
  simulate->add_option("--config", config_path, "JSON config file (reward parameters)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--threshold-secs", threshold, "Override the review interval threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = resolve_config(config_path, port, data_dir);
    if (*serve) return run_serve(config, host);
    if (*import) return run_import(config, csv_path);

    auto reward = config.reward;
    if (threshold) reward.interval_threshold_secs = *threshold;
    reward.check();
    const auto events =
        script == "overtake" ? sim::overtake_script(scenario.seed) : sim::generate_events(scenario);
    if (!log_path.empty()) {
      fs::remove(log_path);
      FileEventLog log(log_path);
      log.write(events);
    }
    std::cout << sim::report_json(sim::run_events(events, reward)) << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "wifiscout: " << e.what() << '\n';
    for (const auto& d : e.details()) std::cerr << "  - " << d << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "wifiscout: " << e.what() << '\n';
    return 1;
  }
}
