#include "masader/refresh.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "masader/error.hpp"
#include "masader/http_util.hpp"

namespace masader {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::FetchFailure, "SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

FetchedSource fetch_source(const SourceConfig& config) {
  if (config.location.empty()) throw Error(ErrorCode::FetchFailure, "source location is empty");
  FetchedSource out;
  if (http::is_http_url(config.location)) {
    auto res = http::get(config.location, config.timeout);
    if (!res.error.empty()) {
      throw Error(ErrorCode::FetchFailure, "fetching " + config.location + ": " + res.error);
    }
    if (res.status < 200 || res.status >= 300) {
      throw Error(ErrorCode::FetchFailure,
                  "fetching " + config.location + ": HTTP status " + std::to_string(res.status));
    }
    out.bytes = std::move(res.body);
  } else {
    std::ifstream in(config.location, std::ios::binary);
    if (!in) throw Error(ErrorCode::FetchFailure, "cannot open " + config.location);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::FetchFailure, "error reading " + config.location);
    out.bytes = std::move(buf).str();
  }
  out.checksum = sha256_hex(out.bytes);
  return out;
}

EmbeddingFallback parse_fallback(std::string_view text) {
  if (text == "none") return EmbeddingFallback::None;
  if (text == "local") return EmbeddingFallback::Local;
  if (text == "previous") return EmbeddingFallback::Previous;
  throw Error(ErrorCode::ConfigError, "unknown embedding fallback '" + std::string(text) + "'");
}

namespace {

ClusterModel reuse_previous(const Schema& schema, const std::vector<DatasetRecord>& records,
                            const SnapshotPtr& prev, const ClusterParams& params,
                            const std::string& cause) {
  if (!prev || !prev->clusters()) {
    throw Error(ErrorCode::BuildFailure, cause + "; no previous embeddings to fall back to");
  }
  const auto& old = *prev->clusters();
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < prev->records().size(); ++i) {
    row_of.emplace(record_text(prev->schema(), prev->records()[i]), i);
  }
  Matrix embeddings(records.size(), old.dim);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto it = row_of.find(record_text(schema, records[i]));
    if (it == row_of.end()) {
      throw Error(ErrorCode::BuildFailure,
                  cause + "; record " + std::to_string(i) + " has no previous embedding");
    }
    auto src = old.embeddings.row(it->second);
    std::copy(src.begin(), src.end(), embeddings.row(i).begin());
  }
  return cluster_embeddings(std::move(embeddings), params, "previous");
}

}  // namespace

SnapshotPtr rebuild(const FetchedSource& source, const SnapshotPtr& prev,
                    EmbeddingProvider& provider, const RebuildParams& params) {
  if (params.checksum_skip && prev && prev->checksum() == source.checksum) return prev;

  IngestResult ingested;
  try {
    ingested = ingest(source.bytes, params.schema, params.format);
  } catch (const Error& e) {
    throw Error(ErrorCode::BuildFailure, std::string("ingestion failed: ") + e.what());
  }

  std::optional<ClusterModel> clusters;
  if (!ingested.records.empty()) {
    try {
      clusters = build_cluster_model(params.schema, ingested.records, provider, params.clustering);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ProviderFailure) {
        throw Error(ErrorCode::BuildFailure, std::string("clustering failed: ") + e.what());
      }
      std::string cause = std::string("embedding provider failed: ") + e.what();
      switch (params.fallback) {
        case EmbeddingFallback::None:
          throw Error(ErrorCode::BuildFailure, cause);
        case EmbeddingFallback::Local: {
          LocalEmbeddingProvider local(params.local_dim, params.local_seed);
          clusters = build_cluster_model(params.schema, ingested.records, local, params.clustering);
          break;
        }
        case EmbeddingFallback::Previous:
          clusters = reuse_previous(params.schema, ingested.records, prev, params.clustering, cause);
          break;
      }
    }
  }

  CatalogSnapshot::Meta meta;
  meta.version = prev ? prev->version() + 1 : 1;
  meta.built_at = params.built_at;
  meta.checksum = source.checksum;
  return std::make_shared<const CatalogSnapshot>(std::move(meta), params.schema,
                                                 std::move(ingested.records), std::move(clusters));
}

bool SystemClock::sleep_until(time_point deadline, std::stop_token stop) {
  std::unique_lock lock(mutex_);
  cv_.wait_until(lock, stop, deadline, [] { return false; });
  return !stop.stop_requested();
}

std::int64_t SystemClock::unix_seconds() const {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string_view to_string(TickRecord::Outcome outcome) {
  switch (outcome) {
    case TickRecord::Outcome::Published: return "published";
    case TickRecord::Outcome::Skipped: return "skipped";
    case TickRecord::Outcome::Failed: return "failed";
  }
  return "skipped";
}

nlohmann::json to_json(const TickRecord& tick) {
  nlohmann::json out;
  std::time_t t = static_cast<std::time_t>(tick.ts);
  std::tm utc{};
  gmtime_r(&t, &utc);
  std::ostringstream ts;
  ts << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  out["ts"] = ts.str();
  out["outcome"] = std::string(to_string(tick.outcome));
  if (tick.version) out["version"] = *tick.version;
  out["duration_ms"] = tick.duration_ms;
  if (!tick.error.empty()) out["error"] = tick.error;
  if (!tick.reason.empty()) out["reason"] = tick.reason;
  return out;
}

TickLogger json_line_logger(std::ostream& out) {
  auto mutex = std::make_shared<std::mutex>();
  return [&out, mutex](const TickRecord& tick) {
    auto line = to_json(tick).dump();
    std::lock_guard lock(*mutex);
    out << line << '\n' << std::flush;
  };
}

RefreshPipeline::RefreshPipeline(SourceConfig source, RebuildParams params,
                                 std::shared_ptr<EmbeddingProvider> provider, SnapshotCell& cell,
                                 Clock& clock, TickLogger logger, Fetcher fetcher)
    : source_(std::move(source)),
      params_(std::move(params)),
      provider_(std::move(provider)),
      cell_(cell),
      clock_(clock),
      logger_(std::move(logger)),
      fetcher_(std::move(fetcher)) {
  if (source_.refresh_interval.count() < 1) {
    throw Error(ErrorCode::ConfigError, "refresh interval must be at least 1 ms");
  }
  if (!provider_) throw Error(ErrorCode::ConfigError, "no embedding provider configured");
  params_.checksum_skip = source_.checksum_skip;
  params_.format = source_.format;
}

RefreshPipeline::~RefreshPipeline() { stop(); }

void RefreshPipeline::emit(const TickRecord& tick) {
  if (logger_) logger_(tick);
}

TickRecord RefreshPipeline::refresh_once() {
  TickRecord tick;
  tick.ts = clock_.unix_seconds();
  const auto started = clock_.now();
  std::unique_lock lock(rebuild_mutex_, std::try_to_lock);
  if (!lock) {
    tick.outcome = TickRecord::Outcome::Skipped;
    tick.reason = "busy";
  } else {
    try {
      auto fetched = fetcher_(source_);
      auto prev = cell_.load();
      RebuildParams params = params_;
      params.built_at = tick.ts;
      auto next = rebuild(fetched, prev, *provider_, params);
      if (next == prev) {
        tick.outcome = TickRecord::Outcome::Skipped;
        tick.reason = "unchanged";
      } else {
        cell_.publish(next);
        tick.outcome = TickRecord::Outcome::Published;
      }
    } catch (const std::exception& e) {
      tick.outcome = TickRecord::Outcome::Failed;
      tick.error = e.what();
    }
  }
  if (auto v = cell_.version()) tick.version = v;
  tick.duration_ms =
      std::chrono::duration<double, std::milli>(clock_.now() - started).count();
  emit(tick);
  return tick;
}

void RefreshPipeline::loop(Clock::time_point start, std::stop_token stop) {
  const auto interval = source_.refresh_interval;
  auto next = start + interval;
  while (clock_.sleep_until(next, stop)) {
    refresh_once();
    next += interval;
    const auto now = clock_.now();
    while (next <= now) {
      TickRecord skipped;
      skipped.ts = clock_.unix_seconds();
      skipped.outcome = TickRecord::Outcome::Skipped;
      skipped.reason = "overrun";
      if (auto v = cell_.version()) skipped.version = v;
      emit(skipped);
      next += interval;
    }
  }
}

void RefreshPipeline::run(std::stop_token stop) {
  const auto start = clock_.now();
  refresh_once();
  loop(start, std::move(stop));
}

void RefreshPipeline::start() {
  stop();
  const auto start = clock_.now();
  refresh_once();
  worker_ = std::jthread([this, start](std::stop_token st) { loop(start, std::move(st)); });
}

void RefreshPipeline::stop() {
  if (worker_.joinable()) {
    worker_.request_stop();
    worker_.join();
  }
}

}  // namespace masader
