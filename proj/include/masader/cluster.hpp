#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "masader/cluster_model.hpp"
#include "masader/embedding.hpp"
#include "masader/schema.hpp"

namespace masader {

struct ClusterParams {
  std::size_t k = 8;
  std::uint64_t seed = 42;
  std::size_t max_iters = 100;
  double tol = 1e-6;
};

// record_text -> embed_batch -> kmeans -> project_2d. k is capped at the
// number of records. Provider errors (ProviderFailure) propagate.
ClusterModel build_cluster_model(const Schema& schema, std::span<const DatasetRecord> records,
                                 EmbeddingProvider& provider, const ClusterParams& params);

// Same pipeline from precomputed embeddings.
ClusterModel cluster_embeddings(Matrix embeddings, const ClusterParams& params,
                                std::string provenance);

}  // namespace masader
