// masader: run the catalogue service or query a catalogue offline.
//
// Exit codes: 0 success, 1 data or query error, 2 usage or configuration error.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "masader/api.hpp"
#include "masader/catalog.hpp"
#include "masader/config.hpp"
#include "masader/error.hpp"
#include "masader/refresh.hpp"
#include "masader/service.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct OfflineArgs {
  std::string source;
  std::string schema;
};

int exit_code_for(const masader::Error& e) {
  switch (e.code()) {
    case masader::ErrorCode::ConfigError:
    case masader::ErrorCode::FetchFailure:
      return kUsageError;
    default:
      return kDataError;
  }
}

masader::IngestResult load_records(const OfflineArgs& args, const masader::Schema& schema) {
  masader::SourceConfig source;
  source.location = args.source;
  auto fetched = masader::fetch_source(source);
  return masader::ingest(fetched.bytes, schema, masader::format_from_path(args.source));
}

masader::CatalogSnapshot load_snapshot(const OfflineArgs& args) {
  auto schema = masader::Schema::load(args.schema);
  auto ingested = load_records(args, schema);
  if (!ingested.diagnostics.empty()) {
    std::cerr << ingested.diagnostics.size()
              << " ingestion issue(s); run 'validate' for details\n";
  }
  return masader::CatalogSnapshot({}, std::move(schema), std::move(ingested.records));
}

void add_offline_flags(CLI::App* cmd, OfflineArgs& args) {
  cmd->add_option("--source", args.source, "Catalogue file (CSV or JSON) or http(s) URL")->required();
  cmd->add_option("--schema", args.schema, "Schema configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
}

int run_serve(const std::string& config_path, std::optional<int> port) {
  masader::ServiceConfig config;
  try {
    config = masader::ServiceConfig::load(config_path);
  } catch (const masader::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsageError;
  }
  if (port) config.port = *port;

  // Block termination signals in every thread; the main thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    masader::CatalogService service(std::move(config));
    int bound = service.start();
    std::cerr << "listening on port " << bound << " (catalogue version "
              << service.cell().version() << ")\n";
    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "shutting down\n";
    service.stop();
  } catch (const masader::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dataset metadata catalogue service and offline query tool"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<int> port;
  auto* serve = app.add_subcommand("serve", "Run the refresh pipeline and HTTP API");
  serve->add_option("--config", config_path, "Service configuration file")
      ->envname("MASADER_CONFIG")
      ->required();
  serve->add_option("--port", port, "Listen port (overrides the config)")
      ->envname("MASADER_PORT")
      ->check(CLI::Range(0, 65535));

  OfflineArgs query_args;
  std::string query_text;
  std::string query_features;
  auto* query = app.add_subcommand("query", "Filter a catalogue, printing the /datasets payload");
  add_offline_flags(query, query_args);
  query->add_option("--query", query_text, "Filtration query");
  query->add_option("--features", query_features, "Comma separated features to keep");

  OfflineArgs tags_args;
  std::string tags_features;
  auto* tags = app.add_subcommand("tags", "Print unique values per feature");
  add_offline_flags(tags, tags_args);
  tags->add_option("--features", tags_features, "Comma separated features (default: all)");

  std::string schema_path;
  auto* schema = app.add_subcommand("schema", "Print feature names in schema order");
  schema->add_option("--schema", schema_path, "Schema configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  OfflineArgs stats_args;
  std::string stats_features;
  auto* stats = app.add_subcommand("stats", "Print value counts per feature");
  add_offline_flags(stats, stats_args);
  stats->add_option("--features", stats_features, "Comma separated features (default: chart set)");

  OfflineArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Report ingestion diagnostics");
  add_offline_flags(validate, validate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*serve) return run_serve(config_path, port);

    if (*schema) {
      auto s = masader::Schema::load(schema_path);
      std::cout << masader::api::render_json(s.names());
      return kOk;
    }
    if (*query) {
      auto snapshot = load_snapshot(query_args);
      std::cout << masader::api::datasets_payload(snapshot, query_text, query_features);
      return kOk;
    }
    if (*tags) {
      auto snapshot = load_snapshot(tags_args);
      std::cout << masader::api::tags_payload(snapshot, tags_features);
      return kOk;
    }
    if (*stats) {
      auto snapshot = load_snapshot(stats_args);
      auto features = stats_features.empty() ? masader::api::default_stats_features()
                                             : masader::split_feature_list(stats_features);
      std::vector<std::string> skipped;
      auto doc = masader::api::stats_document(snapshot, features, &skipped);
      for (const auto& name : skipped) std::cerr << "skipping unknown feature '" << name << "'\n";
      std::cout << masader::api::render_json(doc);
      return kOk;
    }
    if (*validate) {
      auto s = masader::Schema::load(validate_args.schema);
      auto ingested = load_records(validate_args, s);
      for (const auto& d : ingested.diagnostics) std::cout << masader::describe(d) << '\n';
      std::cout << ingested.diagnostics.size()
                << (ingested.diagnostics.size() == 1 ? " issue" : " issues") << '\n';
      return ingested.diagnostics.empty() ? kOk : kDataError;
    }
  } catch (const masader::Error& e) {
    std::cerr << "error: " << masader::to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kUsageError;
}
