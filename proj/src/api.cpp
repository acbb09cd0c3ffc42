#include "masader/api.hpp"

#include <charconv>
#include <chrono>
#include <iostream>

#include "masader/error.hpp"
#include "masader/query.hpp"

namespace masader::api {

const std::string* Response::header(std::string_view name) const {
  for (const auto& [k, v] : headers) {
    if (k == name) return &v;
  }
  return nullptr;
}

std::vector<std::string> default_stats_features() {
  return {"Host",   "Year",    "Access", "Tasks", "Domain",        "License",
          "Dialect", "Form",   "Venue",  "Ethical Risks", "Script"};
}

std::string render_json(const nlohmann::ordered_json& doc) {
  return doc.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

std::string datasets_payload(const CatalogSnapshot& snapshot, std::string_view query,
                             std::string_view features) {
  auto wanted = split_feature_list(features);
  auto matches = query::filter_records(snapshot, query);
  auto projected = project_features(snapshot.schema(), matches, wanted);
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& p : projected) out.push_back(to_json(p));
  return render_json(out);
}

std::string record_payload(const CatalogSnapshot& snapshot, std::int64_t index) {
  return render_json(to_json(snapshot.schema(), get_record(snapshot, index)));
}

std::string schema_payload(const CatalogSnapshot& snapshot) {
  return render_json(schema_names(snapshot));
}

std::string tags_payload(const CatalogSnapshot& snapshot, std::string_view features) {
  auto wanted = split_feature_list(features);
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, values] : unique_tags(snapshot, wanted)) {
    auto& arr = out[name] = nlohmann::ordered_json::array();
    for (const auto& v : values) arr.push_back(to_json(v));
  }
  return render_json(out);
}

nlohmann::ordered_json stats_document(const CatalogSnapshot& snapshot,
                                      const std::vector<std::string>& features,
                                      std::vector<std::string>* skipped) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& name : features) {
    if (!snapshot.schema().find(name)) {
      if (skipped) skipped->push_back(name);
      continue;
    }
    auto& arr = out[name] = nlohmann::ordered_json::array();
    for (const auto& [value, count] : feature_counts(snapshot, name)) {
      nlohmann::ordered_json item;
      item["value"] = to_json(value);
      item["count"] = count;
      arr.push_back(std::move(item));
    }
  }
  return out;
}

std::string clusters_payload(const CatalogSnapshot& snapshot) {
  if (!snapshot.clusters()) {
    throw Error(ErrorCode::BuildFailure, "cluster model is not available");
  }
  const auto& model = *snapshot.clusters();
  auto name_feature = snapshot.schema().find("Name");
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& record : snapshot.records()) {
    nlohmann::ordered_json item;
    item["index"] = record.index;
    item["name"] = name_feature ? to_json(record.values[*name_feature]) : nullptr;
    item["x"] = model.coords2d(record.index, 0);
    item["y"] = model.coords2d(record.index, 1);
    item["cluster"] = model.assignments[record.index];
    out.push_back(std::move(item));
  }
  return render_json(out);
}

namespace {

Response error_response(int status, std::string_view error, const std::string& detail,
                        std::optional<std::size_t> offset = std::nullopt) {
  nlohmann::ordered_json body;
  body["error"] = error;
  if (!detail.empty()) body["detail"] = detail;
  if (offset) body["offset"] = *offset;
  Response r;
  r.status = status;
  r.body = render_json(body);
  return r;
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return 404;
    case ErrorCode::BuildFailure: return 503;
    default: return 400;
  }
}

Response from_error(const Error& e) {
  return error_response(status_for(e.code()), to_string(e.code()), e.what(), e.offset());
}

Response ok(std::string body, int status = 200) {
  Response r;
  r.status = status;
  r.body = std::move(body);
  return r;
}

std::string_view param(const Request& req, const std::string& name) {
  auto it = req.params.find(name);
  return it == req.params.end() ? std::string_view{} : std::string_view(it->second);
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace

Service::Service(const SnapshotCell& cell, Options options, ReportLog* reports,
                 WebhookForwarder* forwarder)
    : cell_(cell), options_(std::move(options)), reports_(reports), forwarder_(forwarder) {}

void Service::finish(Response& response) const {
  if (options_.cors_origin) {
    response.headers.emplace_back("Access-Control-Allow-Origin", *options_.cors_origin);
    response.headers.emplace_back("Vary", "Origin");
  }
}

Response Service::handle(const Request& request) const {
  Response response;
  if (request.method == "OPTIONS") {
    response.status = 204;
    response.content_type.clear();
    if (options_.cors_origin) {
      response.headers.emplace_back("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      response.headers.emplace_back("Access-Control-Allow-Headers", "Content-Type");
    }
  } else if (request.method == "GET") {
    response = get(request);
  } else if (request.method == "POST") {
    response = post_report(request);
  } else {
    response = error_response(405, "MethodNotAllowed", "unsupported method " + request.method);
  }
  finish(response);
  return response;
}

Response Service::get(const Request& request) const {
  std::string_view path = request.path;
  while (path.size() > 1 && path.ends_with('/')) path.remove_suffix(1);
  if (path != "/datasets" && !path.starts_with("/datasets/")) {
    return error_response(404, "NotFound", "no route for " + std::string(path));
  }

  auto snapshot = cell_.load();
  if (!snapshot) {
    return error_response(503, "Unavailable", "catalogue has not been loaded yet");
  }

  Response response;
  try {
    if (path == "/datasets") {
      response = ok(datasets_payload(*snapshot, param(request, "query"), param(request, "features")));
    } else if (path == "/datasets/schema") {
      response = ok(schema_payload(*snapshot));
    } else if (path == "/datasets/tags") {
      response = ok(tags_payload(*snapshot, param(request, "features")));
    } else if (path == "/datasets/stats") {
      std::vector<std::string> skipped;
      response = ok(render_json(stats_document(*snapshot, options_.stats_features, &skipped)));
      if (!skipped.empty()) {
        std::lock_guard lock(warn_mutex_);
        for (const auto& name : skipped) {
          if (warned_.insert(name).second) {
            std::cerr << "stats: skipping unknown feature '" << name << "'\n";
          }
        }
      }
    } else if (path == "/datasets/clusters") {
      if (!snapshot->clusters()) {
        response = error_response(503, "Unavailable", "cluster model is not available");
      } else {
        response = ok(clusters_payload(*snapshot));
      }
    } else {
      auto segment = path.substr(std::string_view("/datasets/").size());
      std::int64_t index = 0;
      auto [ptr, ec] = std::from_chars(segment.data(), segment.data() + segment.size(), index);
      if (ptr != segment.data() + segment.size() || segment.empty() ||
          (ec != std::errc() && ec != std::errc::result_out_of_range)) {
        response = error_response(400, "ValidationError",
                                  "dataset index must be an integer, got '" + std::string(segment) + "'");
      } else if (ec == std::errc::result_out_of_range) {
        response = error_response(404, "OutOfRange", "no dataset at index " + std::string(segment));
      } else {
        response = ok(record_payload(*snapshot, index));
      }
    }
  } catch (const Error& e) {
    response = from_error(e);
  }
  response.headers.emplace_back(std::string(kVersionHeader), std::to_string(snapshot->version()));
  return response;
}

Response Service::post_report(const Request& request) const {
  std::string_view path = request.path;
  while (path.size() > 1 && path.ends_with('/')) path.remove_suffix(1);
  if (path != "/reports") {
    if (path == "/datasets" || path.starts_with("/datasets/")) {
      return error_response(405, "MethodNotAllowed", "datasets are read-only");
    }
    return error_response(404, "NotFound", "no route for " + std::string(path));
  }
  if (!reports_) return error_response(503, "Unavailable", "reporting is not configured");
  auto snapshot = cell_.load();
  if (!snapshot) return error_response(503, "Unavailable", "catalogue has not been loaded yet");

  auto invalid = [](const std::string& detail) {
    return error_response(400, "ValidationError", detail);
  };

  nlohmann::json body = nlohmann::json::parse(request.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) return invalid("body must be a JSON object");

  NewReport report;
  auto idx = body.find("dataset_index");
  if (idx == body.end() || !idx->is_number_integer()) {
    return invalid("dataset_index must be an integer");
  }
  if (idx->is_number_unsigned() ? idx->get<std::uint64_t>() >= snapshot->records().size()
                                : (idx->get<std::int64_t>() < 0 ||
                                   static_cast<std::uint64_t>(idx->get<std::int64_t>()) >=
                                       snapshot->records().size())) {
    return error_response(404, "OutOfRange", "no dataset at index " + idx->dump());
  }
  report.dataset_index = idx->get<std::size_t>();

  auto msg = body.find("message");
  if (msg == body.end() || !msg->is_string()) return invalid("message must be a string");
  report.message = msg->get<std::string>();
  if (trim(report.message).empty()) return invalid("message must not be empty");
  if (utf8_length(report.message) > kMaxReportMessageChars) {
    return invalid("message exceeds " + std::to_string(kMaxReportMessageChars) + " characters");
  }

  if (auto f = body.find("field"); f != body.end() && !f->is_null()) {
    if (!f->is_string()) return invalid("field must be a string");
    if (!snapshot->schema().find(f->get<std::string>())) {
      return error_response(400, "UnknownFeature", "unknown feature '" + f->get<std::string>() + "'");
    }
    report.field = f->get<std::string>();
  }
  if (auto r = body.find("reporter"); r != body.end() && !r->is_null()) {
    if (!r->is_string()) return invalid("reporter must be a string");
    if (!trim(r->get<std::string>()).empty()) report.reporter = r->get<std::string>();
  }

  auto now = std::chrono::duration_cast<std::chrono::seconds>(
                 std::chrono::system_clock::now().time_since_epoch())
                 .count();
  IssueReport stored;
  try {
    stored = reports_->append(report, forwarder_ ? ForwardStatus::Pending : ForwardStatus::Disabled, now);
  } catch (const Error& e) {
    return error_response(500, "StorageError", e.what());
  }
  if (forwarder_) forwarder_->enqueue(stored);

  nlohmann::ordered_json out;
  out["id"] = stored.id;
  auto response = ok(render_json(out), 201);
  response.headers.emplace_back(std::string(kVersionHeader), std::to_string(snapshot->version()));
  return response;
}

}  // namespace masader::api
