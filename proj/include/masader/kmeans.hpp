#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "masader/matrix.hpp"

namespace masader {

// mt19937_64 is fully specified by the standard; the double conversion is
// done here rather than through std::uniform_real_distribution, whose output
// differs between standard libraries.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

struct KMeansOptions {
  std::size_t k = 8;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
  double tol = 1e-6;  // max-norm centroid movement
};

struct KMeansResult {
  std::vector<std::size_t> assignments;
  Matrix centroids;
  double distortion = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  // Distortion after the initial assignment and after every update and
  // assignment step that followed it.
  std::vector<double> distortion_trace;
};

// k-means++ seeding. Returns the chosen row indices in selection order.
std::vector<std::size_t> kmeanspp_seeds(const Matrix& vectors, std::size_t k, DeterministicRng& rng);

// Lloyd's algorithm from k-means++ seeds. Nearest-centroid ties go to the
// lowest cluster id; a cluster that empties takes the point farthest from its
// own centroid. Throws InvalidK unless 1 <= k <= rows.
KMeansResult kmeans(const Matrix& vectors, const KMeansOptions& options);

double distortion(const Matrix& vectors, const std::vector<std::size_t>& assignments,
                  const Matrix& centroids);

}  // namespace masader
