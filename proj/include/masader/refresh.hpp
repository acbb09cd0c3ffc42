#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <stop_token>
#include <string>
#include <string_view>
#include <thread>

#include <json.hpp>

#include "masader/catalog.hpp"
#include "masader/cluster.hpp"
#include "masader/embedding.hpp"
#include "masader/snapshot_cell.hpp"

namespace masader {

struct SourceConfig {
  std::string location;  // file path or http(s) URL
  SourceFormat format = SourceFormat::Csv;
  // Configuration files give whole seconds; programmatic callers may use
  // finer steps.
  std::chrono::milliseconds refresh_interval{600'000};
  bool checksum_skip = true;
  std::chrono::milliseconds timeout{30'000};
};

struct FetchedSource {
  std::string bytes;
  std::string checksum;  // hex SHA-256 of bytes
};

std::string sha256_hex(std::string_view bytes);

// Reads the whole source. Throws FetchFailure (I/O error, transport error or
// non-2xx status).
FetchedSource fetch_source(const SourceConfig& config);

enum class EmbeddingFallback { None, Local, Previous };

EmbeddingFallback parse_fallback(std::string_view text);

struct RebuildParams {
  Schema schema;
  SourceFormat format = SourceFormat::Csv;
  bool checksum_skip = true;
  ClusterParams clustering;
  EmbeddingFallback fallback = EmbeddingFallback::Local;
  // Settings for the local provider used as fallback.
  std::size_t local_dim = 256;
  std::uint64_t local_seed = 0;
  std::int64_t built_at = 0;
};

// Builds the next snapshot. When checksum skipping is on and the bytes match
// the previous snapshot, returns prev itself. Throws BuildFailure when the
// source cannot be ingested or no embedding route is left.
SnapshotPtr rebuild(const FetchedSource& source, const SnapshotPtr& prev,
                    EmbeddingProvider& provider, const RebuildParams& params);

class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;

  virtual ~Clock() = default;
  virtual time_point now() const = 0;
  // Returns false if stop was requested before the deadline.
  virtual bool sleep_until(time_point deadline, std::stop_token stop) = 0;
  virtual std::int64_t unix_seconds() const = 0;
};

class SystemClock final : public Clock {
 public:
  time_point now() const override { return std::chrono::steady_clock::now(); }
  bool sleep_until(time_point deadline, std::stop_token stop) override;
  std::int64_t unix_seconds() const override;

 private:
  std::mutex mutex_;
  std::condition_variable_any cv_;
};

struct TickRecord {
  enum class Outcome { Published, Skipped, Failed };

  std::int64_t ts = 0;
  Outcome outcome = Outcome::Skipped;
  std::optional<std::uint64_t> version;  // live version after the tick
  double duration_ms = 0.0;
  std::string error;
  std::string reason;  // why a tick was skipped: unchanged, busy, overrun
};

std::string_view to_string(TickRecord::Outcome outcome);
nlohmann::json to_json(const TickRecord& tick);

using TickLogger = std::function<void(const TickRecord&)>;

// One JSON object per line, serialized across threads.
TickLogger json_line_logger(std::ostream& out);

// Fetch, rebuild and publish on a fixed-rate timer. At most one rebuild runs
// at a time and a failed tick never touches the live snapshot.
class RefreshPipeline {
 public:
  using Fetcher = std::function<FetchedSource(const SourceConfig&)>;

  RefreshPipeline(SourceConfig source, RebuildParams params,
                  std::shared_ptr<EmbeddingProvider> provider, SnapshotCell& cell, Clock& clock,
                  TickLogger logger, Fetcher fetcher = fetch_source);
  ~RefreshPipeline();

  RefreshPipeline(const RefreshPipeline&) = delete;
  RefreshPipeline& operator=(const RefreshPipeline&) = delete;

  // One fetch-rebuild-publish cycle. Never throws; the outcome is logged and
  // returned. Returns Skipped/busy when another rebuild is in progress.
  TickRecord refresh_once();

  // Immediate refresh, then one per interval until stop is requested or the
  // clock refuses to sleep. Ticks that fall inside an overrunning rebuild
  // are skipped, not queued.
  void run(std::stop_token stop);

  // Runs the initial refresh on the calling thread, then continues run() in
  // a background thread.
  void start();
  void stop();

 private:
  void loop(Clock::time_point start, std::stop_token stop);
  void emit(const TickRecord& tick);

  SourceConfig source_;
  RebuildParams params_;
  std::shared_ptr<EmbeddingProvider> provider_;
  SnapshotCell& cell_;
  Clock& clock_;
  TickLogger logger_;
  Fetcher fetcher_;
  std::mutex rebuild_mutex_;
  std::jthread worker_;
};

}  // namespace masader
