#include "masader/service.hpp"

#include <iostream>

#include "masader/error.hpp"

namespace masader {

std::shared_ptr<EmbeddingProvider> make_provider(const EmbeddingConfig& config) {
  if (config.provider == "remote") {
    return std::make_shared<RemoteEmbeddingProvider>(config.remote);
  }
  return std::make_shared<LocalEmbeddingProvider>(config.dim, config.seed);
}

CatalogService::CatalogService(ServiceConfig config, std::shared_ptr<EmbeddingProvider> provider)
    : config_(std::move(config)) {
  if (!provider) provider = make_provider(config_.embedding);

  TickLogger logger = json_line_logger(std::cerr);
  if (!config_.refresh_log.empty()) {
    refresh_log_.open(config_.refresh_log, std::ios::app);
    if (!refresh_log_) {
      throw Error(ErrorCode::ConfigError, "cannot open refresh log " + config_.refresh_log.string());
    }
    logger = json_line_logger(refresh_log_);
  }

  reports_ = std::make_unique<ReportLog>(config_.report_log);
  if (config_.webhook) forwarder_ = std::make_unique<WebhookForwarder>(*config_.webhook, *reports_);

  api::Options options;
  options.stats_features = config_.stats_features;
  options.cors_origin = config_.cors_origin;
  api_ = std::make_unique<api::Service>(cell_, std::move(options), reports_.get(), forwarder_.get());
  server_ = std::make_unique<HttpServer>(*api_);

  RebuildParams params;
  params.schema = config_.schema;
  params.clustering = config_.clustering;
  params.fallback = config_.embedding.fallback;
  params.local_dim = config_.embedding.dim;
  params.local_seed = config_.embedding.seed;
  pipeline_ = std::make_unique<RefreshPipeline>(config_.source, std::move(params),
                                                std::move(provider), cell_, clock_, logger);
}

CatalogService::~CatalogService() { stop(); }

int CatalogService::start() {
  int port = server_->bind(config_.host, config_.port);
  server_->start();
  pipeline_->start();
  return port;
}

void CatalogService::stop() {
  if (pipeline_) pipeline_->stop();
  if (server_) server_->stop();
}

}  // namespace masader
