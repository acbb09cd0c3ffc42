#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

namespace masader {

enum class ForwardStatus { Pending, Forwarded, Failed, Disabled };

std::string_view to_string(ForwardStatus status);
ForwardStatus parse_forward_status(std::string_view text);

struct NewReport {
  std::size_t dataset_index = 0;
  std::optional<std::string> field;
  std::string message;
  std::optional<std::string> reporter;  // absent for anonymous reports
};

struct IssueReport {
  std::string id;
  std::size_t dataset_index = 0;
  std::optional<std::string> field;
  std::string message;
  std::optional<std::string> reporter;
  std::int64_t created_at = 0;
  ForwardStatus forward_status = ForwardStatus::Disabled;
};

nlohmann::json to_json(const IssueReport& report);

constexpr std::size_t kMaxReportMessageChars = 4000;

// Append-only JSON-lines store. A report is written once as
// {"type":"report",...}; later forwarding outcomes are appended as
// {"type":"status","id":...,"forward_status":...} lines. Existing lines are
// never rewritten and ids continue from the highest id already in the file.
class ReportLog {
 public:
  explicit ReportLog(std::filesystem::path path);

  IssueReport append(const NewReport& report, ForwardStatus initial, std::int64_t created_at);
  void record_status(const std::string& id, ForwardStatus status, const std::string& detail = {});

  std::optional<IssueReport> find(const std::string& id) const;
  std::vector<IssueReport> all() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  void write_line(const nlohmann::json& line);

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::ofstream out_;
  std::uint64_t next_seq_ = 1;
  std::vector<IssueReport> reports_;
};

struct WebhookConfig {
  std::string url;
  std::string token;  // bearer token, optional
  int retries = 3;
  std::chrono::milliseconds backoff{500};  // doubled after every failed attempt
  std::chrono::milliseconds timeout{10'000};
};

// Delivers reports to an issue tracker webhook on a background thread.
class WebhookForwarder {
 public:
  WebhookForwarder(WebhookConfig config, ReportLog& log);
  ~WebhookForwarder();

  WebhookForwarder(const WebhookForwarder&) = delete;
  WebhookForwarder& operator=(const WebhookForwarder&) = delete;

  void enqueue(IssueReport report);
  // Blocks until the queue is drained or the timeout passes.
  bool wait_idle(std::chrono::milliseconds timeout);

 private:
  void work(std::stop_token stop);
  bool deliver(const IssueReport& report, std::string& error, std::stop_token stop);

  WebhookConfig config_;
  ReportLog& log_;
  std::mutex mutex_;
  std::condition_variable_any cv_;
  std::deque<IssueReport> queue_;
  bool busy_ = false;
  std::jthread worker_;
};

}  // namespace masader
