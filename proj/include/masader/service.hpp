#pragma once

#include <fstream>
#include <memory>
#include <optional>

#include "masader/api.hpp"
#include "masader/config.hpp"
#include "masader/http_server.hpp"
#include "masader/refresh.hpp"
#include "masader/reports.hpp"
#include "masader/snapshot_cell.hpp"

namespace masader {

std::shared_ptr<EmbeddingProvider> make_provider(const EmbeddingConfig& config);

// The assembled catalogue service: snapshot cell, refresh pipeline, report
// log, optional webhook forwarder and the HTTP front end.
class CatalogService {
 public:
  explicit CatalogService(ServiceConfig config,
                          std::shared_ptr<EmbeddingProvider> provider = nullptr);
  ~CatalogService();

  CatalogService(const CatalogService&) = delete;
  CatalogService& operator=(const CatalogService&) = delete;

  // Binds the listener, runs the initial refresh synchronously and starts
  // the periodic refresh. Returns the bound port.
  int start();
  void stop();

  SnapshotCell& cell() noexcept { return cell_; }
  RefreshPipeline& pipeline() noexcept { return *pipeline_; }
  ReportLog& reports() noexcept { return *reports_; }
  WebhookForwarder* forwarder() noexcept { return forwarder_.get(); }
  const api::Service& api() const noexcept { return *api_; }
  int port() const noexcept { return server_->port(); }

 private:
  ServiceConfig config_;
  SnapshotCell cell_;
  SystemClock clock_;
  std::ofstream refresh_log_;
  std::unique_ptr<ReportLog> reports_;
  std::unique_ptr<WebhookForwarder> forwarder_;
  std::unique_ptr<api::Service> api_;
  std::unique_ptr<HttpServer> server_;
  std::unique_ptr<RefreshPipeline> pipeline_;
};

}  // namespace masader
