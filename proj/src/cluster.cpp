#include "masader/cluster.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "masader/error.hpp"
#include "masader/kmeans.hpp"
#include "masader/pca.hpp"

namespace masader {

ClusterModel cluster_embeddings(Matrix embeddings, const ClusterParams& params,
                                std::string provenance) {
  if (embeddings.rows() == 0) {
    throw Error(ErrorCode::InvalidK, "cannot cluster an empty catalogue");
  }
  KMeansOptions options;
  options.k = std::min(params.k, embeddings.rows());
  options.seed = params.seed;
  options.max_iters = params.max_iters;
  options.tol = params.tol;
  auto fit = kmeans(embeddings, options);

  ClusterModel model;
  model.dim = embeddings.cols();
  model.coords2d = project_2d(embeddings);
  model.embeddings = std::move(embeddings);
  model.assignments = std::move(fit.assignments);
  model.centroids = std::move(fit.centroids);
  model.k = options.k;
  model.seed = params.seed;
  model.distortion = fit.distortion;
  model.provenance = std::move(provenance);
  return model;
}

ClusterModel build_cluster_model(const Schema& schema, std::span<const DatasetRecord> records,
                                 EmbeddingProvider& provider, const ClusterParams& params) {
  std::vector<std::string> texts;
  texts.reserve(records.size());
  for (const auto& r : records) texts.push_back(record_text(schema, r));
  auto embeddings = provider.embed_batch(texts);
  if (embeddings.rows() != records.size() || embeddings.cols() != provider.dimension()) {
    throw Error(ErrorCode::ProviderFailure, "embedding provider returned a " +
                                                std::to_string(embeddings.rows()) + "x" +
                                                std::to_string(embeddings.cols()) + " matrix");
  }
  return cluster_embeddings(std::move(embeddings), params, provider.name());
}

}  // namespace masader
