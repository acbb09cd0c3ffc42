#include "masader/config.hpp"

#include <fstream>

#include "masader/api.hpp"
#include "masader/error.hpp"
#include "masader/http_util.hpp"

namespace masader {

namespace {

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::ConfigError, std::string("config key '") + key + "' has the wrong type");
  }
}

const nlohmann::json& section(const nlohmann::json& doc, const char* key) {
  static const nlohmann::json empty = nlohmann::json::object();
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return empty;
  if (!it->is_object()) {
    throw Error(ErrorCode::ConfigError, std::string("config section '") + key + "' must be an object");
  }
  return *it;
}

std::string resolve(const std::string& location, const std::filesystem::path& base) {
  if (location.empty() || http::is_http_url(location)) return location;
  std::filesystem::path p(location);
  return p.is_absolute() ? location : (base / p).lexically_normal().string();
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const nlohmann::json& doc, const std::filesystem::path& base) {
  if (!doc.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  ServiceConfig cfg;
  cfg.host = get_or<std::string>(doc, "host", cfg.host);
  cfg.port = get_or<int>(doc, "port", cfg.port);
  if (cfg.port < 0 || cfg.port > 65535) throw Error(ErrorCode::ConfigError, "port out of range");

  const auto& source = section(doc, "source");
  cfg.source.location = resolve(get_or<std::string>(source, "location", ""), base);
  if (cfg.source.location.empty()) throw Error(ErrorCode::ConfigError, "source.location is required");
  if (source.contains("format")) {
    cfg.source.format = parse_source_format(get_or<std::string>(source, "format", "csv"));
  } else {
    cfg.source.format = format_from_path(cfg.source.location);
  }
  auto interval_s = get_or<std::int64_t>(source, "refresh_interval_seconds", 600);
  if (interval_s < 1) {
    throw Error(ErrorCode::ConfigError, "source.refresh_interval_seconds must be >= 1");
  }
  cfg.source.refresh_interval = std::chrono::seconds(interval_s);
  cfg.source.checksum_skip = get_or<bool>(source, "checksum_skip", cfg.source.checksum_skip);
  cfg.source.timeout = std::chrono::seconds(get_or<int>(source, "timeout_seconds", 30));

  auto schema_path = get_or<std::string>(doc, "schema", "");
  if (schema_path.empty()) throw Error(ErrorCode::ConfigError, "schema path is required");
  cfg.schema = Schema::load(resolve(schema_path, base));

  const auto& clustering = section(doc, "clustering");
  cfg.clustering.k = get_or<std::size_t>(clustering, "k", cfg.clustering.k);
  cfg.clustering.seed = get_or<std::uint64_t>(clustering, "seed", cfg.clustering.seed);
  cfg.clustering.max_iters = get_or<std::size_t>(clustering, "max_iters", cfg.clustering.max_iters);
  cfg.clustering.tol = get_or<double>(clustering, "tol", cfg.clustering.tol);
  if (cfg.clustering.k < 1) throw Error(ErrorCode::ConfigError, "clustering.k must be >= 1");

  const auto& embedding = section(doc, "embedding");
  cfg.embedding.provider = get_or<std::string>(embedding, "provider", cfg.embedding.provider);
  if (cfg.embedding.provider != "local" && cfg.embedding.provider != "remote") {
    throw Error(ErrorCode::ConfigError, "embedding.provider must be 'local' or 'remote'");
  }
  cfg.embedding.dim = get_or<std::size_t>(embedding, "dim", cfg.embedding.dim);
  cfg.embedding.seed = get_or<std::uint64_t>(embedding, "seed", cfg.embedding.seed);
  cfg.embedding.fallback = parse_fallback(get_or<std::string>(embedding, "fallback", "local"));
  auto& remote = cfg.embedding.remote;
  remote.url = get_or<std::string>(embedding, "url", "");
  remote.token = get_or<std::string>(embedding, "token", "");
  remote.dim = get_or<std::size_t>(embedding, "remote_dim", remote.dim);
  remote.timeout = std::chrono::seconds(get_or<int>(embedding, "timeout_seconds", 30));
  remote.retries = get_or<int>(embedding, "retries", remote.retries);
  remote.backoff = std::chrono::milliseconds(get_or<int>(embedding, "backoff_ms", 500));
  remote.batch_size = get_or<std::size_t>(embedding, "batch_size", remote.batch_size);
  if (cfg.embedding.provider == "remote" && remote.url.empty()) {
    throw Error(ErrorCode::ConfigError, "embedding.url is required for the remote provider");
  }
  if (cfg.embedding.dim < 2) throw Error(ErrorCode::ConfigError, "embedding.dim must be >= 2");

  cfg.stats_features = get_or<std::vector<std::string>>(doc, "stats_features",
                                                         api::default_stats_features());
  cfg.report_log = resolve(get_or<std::string>(doc, "report_log", "reports.jsonl"), base);

  const auto& webhook = section(doc, "webhook");
  if (auto url = get_or<std::string>(webhook, "url", ""); !url.empty()) {
    WebhookConfig w;
    w.url = url;
    http::split_url(w.url);
    w.token = get_or<std::string>(webhook, "token", "");
    w.retries = get_or<int>(webhook, "retries", w.retries);
    w.backoff = std::chrono::milliseconds(get_or<int>(webhook, "backoff_ms", 500));
    w.timeout = std::chrono::seconds(get_or<int>(webhook, "timeout_seconds", 10));
    cfg.webhook = std::move(w);
  }
  if (auto origin = get_or<std::string>(doc, "cors_origin", ""); !origin.empty()) {
    cfg.cors_origin = origin;
  }
  if (auto log = get_or<std::string>(doc, "refresh_log", ""); !log.empty()) {
    cfg.refresh_log = resolve(log, base);
  }
  return cfg;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, "config file " + path.string() + ": " + e.what());
  }
  auto base = std::filesystem::absolute(path).parent_path();
  return from_json(doc, base);
}

}  // namespace masader
