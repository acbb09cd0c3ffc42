#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "masader/catalog.hpp"
#include "masader/reports.hpp"
#include "masader/snapshot_cell.hpp"

namespace masader::api {

inline constexpr std::string_view kVersionHeader = "X-Catalog-Version";

struct Request {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> params;  // decoded query parameters
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string content_type = "application/json";

  const std::string* header(std::string_view name) const;
};

// Host, Year, Access, Tasks, Domain, License, Dialect, Form, Venue,
// Ethical Risks, Script.
std::vector<std::string> default_stats_features();

// Pretty-printed (2-space) JSON with a trailing newline. Invalid UTF-8 is
// replaced rather than rejected.
std::string render_json(const nlohmann::ordered_json& doc);

// Payload builders shared by the HTTP handlers and the CLI. All throw
// masader::Error.
std::string datasets_payload(const CatalogSnapshot& snapshot, std::string_view query,
                             std::string_view features);
std::string record_payload(const CatalogSnapshot& snapshot, std::int64_t index);
std::string schema_payload(const CatalogSnapshot& snapshot);
std::string tags_payload(const CatalogSnapshot& snapshot, std::string_view features);
nlohmann::ordered_json stats_document(const CatalogSnapshot& snapshot,
                                      const std::vector<std::string>& features,
                                      std::vector<std::string>* skipped = nullptr);
std::string clusters_payload(const CatalogSnapshot& snapshot);

struct Options {
  std::vector<std::string> stats_features = default_stats_features();
  std::optional<std::string> cors_origin;
};

// Transport-independent request handler. Each request reads exactly one
// snapshot; its version is returned in the X-Catalog-Version header.
class Service {
 public:
  Service(const SnapshotCell& cell, Options options, ReportLog* reports = nullptr,
          WebhookForwarder* forwarder = nullptr);

  Response handle(const Request& request) const;

 private:
  Response get(const Request& request) const;
  Response post_report(const Request& request) const;
  void finish(Response& response) const;

  const SnapshotCell& cell_;
  Options options_;
  ReportLog* reports_;
  WebhookForwarder* forwarder_;
  mutable std::mutex warn_mutex_;
  mutable std::set<std::string> warned_;
};

}  // namespace masader::api
