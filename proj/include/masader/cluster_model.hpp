#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "masader/matrix.hpp"

namespace masader {

struct ClusterModel {
  std::size_t dim = 0;
  Matrix embeddings;                     // n x dim
  std::vector<std::size_t> assignments;  // n cluster ids in [0, k)
  Matrix centroids;                      // k x dim
  Matrix coords2d;                       // n x 2
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double distortion = 0.0;
  // Which provider produced the embeddings: "local", "remote" or "previous".
  std::string provenance;

  bool operator==(const ClusterModel&) const = default;
};

}  // namespace masader
