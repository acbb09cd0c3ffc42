#include "masader/reports.hpp"

#include <charconv>

#include "masader/error.hpp"
#include "masader/http_util.hpp"

namespace masader {

std::string_view to_string(ForwardStatus status) {
  switch (status) {
    case ForwardStatus::Pending: return "pending";
    case ForwardStatus::Forwarded: return "forwarded";
    case ForwardStatus::Failed: return "failed";
    case ForwardStatus::Disabled: return "disabled";
  }
  return "disabled";
}

ForwardStatus parse_forward_status(std::string_view text) {
  if (text == "pending") return ForwardStatus::Pending;
  if (text == "forwarded") return ForwardStatus::Forwarded;
  if (text == "failed") return ForwardStatus::Failed;
  if (text == "disabled") return ForwardStatus::Disabled;
  throw Error(ErrorCode::ValidationError, "unknown forward status '" + std::string(text) + "'");
}

nlohmann::json to_json(const IssueReport& report) {
  nlohmann::json out;
  out["id"] = report.id;
  out["dataset_index"] = report.dataset_index;
  out["field"] = report.field ? nlohmann::json(*report.field) : nlohmann::json(nullptr);
  out["message"] = report.message;
  out["reporter"] = report.reporter ? nlohmann::json(*report.reporter) : nlohmann::json(nullptr);
  out["created_at"] = report.created_at;
  out["forward_status"] = std::string(to_string(report.forward_status));
  return out;
}

namespace {

constexpr std::string_view kIdPrefix = "rpt-";

std::optional<std::uint64_t> id_sequence(std::string_view id) {
  if (!id.starts_with(kIdPrefix)) return std::nullopt;
  id.remove_prefix(kIdPrefix.size());
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), v);
  if (ec != std::errc() || ptr != id.data() + id.size()) return std::nullopt;
  return v;
}

std::string format_id(std::uint64_t seq) {
  std::string digits = std::to_string(seq);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return std::string(kIdPrefix) + digits;
}

std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

ReportLog::ReportLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  {
    std::ifstream in(path_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        auto j = nlohmann::json::parse(line);
        auto type = j.value("type", "");
        auto id = j.at("id").get<std::string>();
        if (auto seq = id_sequence(id); seq && *seq >= next_seq_) next_seq_ = *seq + 1;
        if (type == "report") {
          IssueReport r;
          r.id = id;
          r.dataset_index = j.at("dataset_index").get<std::size_t>();
          r.field = optional_string(j, "field");
          r.message = j.at("message").get<std::string>();
          r.reporter = optional_string(j, "reporter");
          r.created_at = j.value("created_at", std::int64_t{0});
          r.forward_status = parse_forward_status(j.value("forward_status", "disabled"));
          reports_.push_back(std::move(r));
        } else if (type == "status") {
          auto status = parse_forward_status(j.at("forward_status").get<std::string>());
          for (auto& r : reports_) {
            if (r.id == id) r.forward_status = status;
          }
        }
      } catch (const std::exception& e) {
        throw Error(ErrorCode::ConfigError, "report log " + path_.string() + " line " +
                                                std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  out_.open(path_, std::ios::app);
  if (!out_) throw Error(ErrorCode::ConfigError, "cannot open report log " + path_.string());
}

void ReportLog::write_line(const nlohmann::json& line) {
  out_ << line.dump() << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorCode::ValidationError, "write to report log failed");
}

IssueReport ReportLog::append(const NewReport& report, ForwardStatus initial,
                              std::int64_t created_at) {
  std::lock_guard lock(mutex_);
  IssueReport r;
  r.id = format_id(next_seq_);
  r.dataset_index = report.dataset_index;
  r.field = report.field;
  r.message = report.message;
  r.reporter = report.reporter;
  r.created_at = created_at;
  r.forward_status = initial;

  auto line = to_json(r);
  line["type"] = "report";
  write_line(line);
  ++next_seq_;
  reports_.push_back(r);
  return r;
}

void ReportLog::record_status(const std::string& id, ForwardStatus status,
                              const std::string& detail) {
  std::lock_guard lock(mutex_);
  nlohmann::json line = {{"type", "status"}, {"id", id},
                         {"forward_status", std::string(to_string(status))}};
  if (!detail.empty()) line["detail"] = detail;
  write_line(line);
  for (auto& r : reports_) {
    if (r.id == id) r.forward_status = status;
  }
}

std::optional<IssueReport> ReportLog::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  for (const auto& r : reports_) {
    if (r.id == id) return r;
  }
  return std::nullopt;
}

std::vector<IssueReport> ReportLog::all() const {
  std::lock_guard lock(mutex_);
  return reports_;
}

WebhookForwarder::WebhookForwarder(WebhookConfig config, ReportLog& log)
    : config_(std::move(config)), log_(log) {
  http::split_url(config_.url);  // validates
  worker_ = std::jthread([this](std::stop_token st) { work(std::move(st)); });
}

WebhookForwarder::~WebhookForwarder() {
  worker_.request_stop();
  cv_.notify_all();
}

void WebhookForwarder::enqueue(IssueReport report) {
  {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(report));
  }
  cv_.notify_all();
}

bool WebhookForwarder::wait_idle(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  return cv_.wait_for(lock, timeout, [this] { return queue_.empty() && !busy_; });
}

bool WebhookForwarder::deliver(const IssueReport& report, std::string& error,
                               std::stop_token stop) {
  http::Headers headers;
  if (!config_.token.empty()) headers.emplace_back("Authorization", "Bearer " + config_.token);
  const auto body = to_json(report).dump();
  auto delay = config_.backoff;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::unique_lock lock(mutex_);
      cv_.wait_for(lock, stop, delay, [] { return false; });
      if (stop.stop_requested()) {
        error = "shutdown before delivery";
        return false;
      }
      delay *= 2;
    }
    auto res = http::post(config_.url, body, "application/json", headers, config_.timeout);
    if (res.ok()) return true;
    error = res.error.empty() ? "HTTP status " + std::to_string(res.status) : res.error;
  }
  error = "after " + std::to_string(config_.retries + 1) + " attempts: " + error;
  return false;
}

void WebhookForwarder::work(std::stop_token stop) {
  while (true) {
    IssueReport next;
    {
      std::unique_lock lock(mutex_);
      busy_ = false;
      cv_.notify_all();
      if (!cv_.wait(lock, stop, [this] { return !queue_.empty(); })) return;
      next = std::move(queue_.front());
      queue_.pop_front();
      busy_ = true;
    }
    std::string error;
    bool ok = deliver(next, error, stop);
    if (stop.stop_requested() && !ok) return;
    log_.record_status(next.id, ok ? ForwardStatus::Forwarded : ForwardStatus::Failed, error);
  }
}

}  // namespace masader
