#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "masader/cluster.hpp"
#include "masader/embedding.hpp"
#include "masader/refresh.hpp"
#include "masader/reports.hpp"

namespace masader {

struct EmbeddingConfig {
  std::string provider = "local";  // "local" or "remote"
  std::size_t dim = 256;
  std::uint64_t seed = 0;
  EmbeddingFallback fallback = EmbeddingFallback::Local;
  RemoteProviderConfig remote;
};

// Service configuration file. Relative paths are resolved against the
// directory holding the file.
//
// {
//   "host": "0.0.0.0", "port": 8080,
//   "source": {"location": "catalogue.csv", "format": "csv",
//              "refresh_interval_seconds": 600, "checksum_skip": true},
//   "schema": "schema.json",
//   "clustering": {"k": 8, "seed": 42, "max_iters": 100, "tol": 1e-6},
//   "embedding": {"provider": "local", "dim": 256, "seed": 0, "fallback": "local",
//                 "url": "...", "token": "...", "remote_dim": 384,
//                 "timeout_seconds": 30, "retries": 3, "backoff_ms": 500},
//   "stats_features": ["Host", "Year", ...],
//   "report_log": "reports.jsonl",
//   "webhook": {"url": "...", "token": "...", "retries": 3, "backoff_ms": 500},
//   "cors_origin": "*",
//   "refresh_log": "refresh.log"
// }
struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  SourceConfig source;
  Schema schema;
  ClusterParams clustering;
  EmbeddingConfig embedding;
  std::vector<std::string> stats_features;
  std::filesystem::path report_log;
  std::optional<WebhookConfig> webhook;
  std::optional<std::string> cors_origin;
  std::filesystem::path refresh_log;  // empty: stderr

  // Throws ConfigError.
  static ServiceConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
  static ServiceConfig load(const std::filesystem::path& path);
};

}  // namespace masader
