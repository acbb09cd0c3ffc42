#include "masader/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "masader/error.hpp"

namespace masader {

namespace {

std::size_t nearest(std::span<const double> point, const Matrix& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    double d = squared_distance(point, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<std::size_t> assign_all(const Matrix& vectors, const Matrix& centroids) {
  std::vector<std::size_t> out(vectors.rows());
  for (std::size_t i = 0; i < vectors.rows(); ++i) out[i] = nearest(vectors.row(i), centroids);
  return out;
}

void reseed_empty(const Matrix& vectors, std::vector<std::size_t>& assignments, Matrix& centroids) {
  const std::size_t k = centroids.rows();
  std::vector<std::size_t> sizes(k, 0);
  for (auto a : assignments) ++sizes[a];

  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    std::size_t donor = vectors.rows();
    double far = -1.0;
    for (std::size_t i = 0; i < vectors.rows(); ++i) {
      if (sizes[assignments[i]] < 2) continue;
      double d = squared_distance(vectors.row(i), centroids.row(assignments[i]));
      if (d > far) {
        far = d;
        donor = i;
      }
    }
    if (donor == vectors.rows()) break;  // unreachable while k <= n
    --sizes[assignments[donor]];
    assignments[donor] = c;
    sizes[c] = 1;
    auto src = vectors.row(donor);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
  }
}

Matrix cluster_means(const Matrix& vectors, const std::vector<std::size_t>& assignments,
                     const Matrix& previous) {
  Matrix sums(previous.rows(), previous.cols(), 0.0);
  std::vector<std::size_t> counts(previous.rows(), 0);
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    auto dst = sums.row(assignments[i]);
    auto src = vectors.row(i);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
    ++counts[assignments[i]];
  }
  for (std::size_t c = 0; c < sums.rows(); ++c) {
    auto row = sums.row(c);
    if (counts[c] == 0) {
      auto old = previous.row(c);
      std::copy(old.begin(), old.end(), row.begin());
      continue;
    }
    double n = static_cast<double>(counts[c]);
    for (double& x : row) x /= n;
  }
  return sums;
}

double max_movement(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  }
  return m;
}

}  // namespace

double distortion(const Matrix& vectors, const std::vector<std::size_t>& assignments,
                  const Matrix& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    total += squared_distance(vectors.row(i), centroids.row(assignments[i]));
  }
  return total;
}

std::vector<std::size_t> kmeanspp_seeds(const Matrix& vectors, std::size_t k, DeterministicRng& rng) {
  const std::size_t n = vectors.rows();
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  chosen.push_back(rng.index(n));

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(vectors.row(i), vectors.row(chosen[0]));

  while (chosen.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;

    std::size_t pick = n;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      double acc = 0.0;
      std::size_t last_positive = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        last_positive = i;
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) pick = last_positive;
    } else {
      // Every point coincides with a chosen seed.
      pick = rng.index(n);
    }
    chosen.push_back(pick);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(vectors.row(i), vectors.row(pick)));
    }
  }
  return chosen;
}

KMeansResult kmeans(const Matrix& vectors, const KMeansOptions& options) {
  const std::size_t n = vectors.rows();
  const std::size_t k = options.k;
  if (k < 1 || k > n) {
    throw Error(ErrorCode::InvalidK,
                "k must be between 1 and the number of vectors (" + std::to_string(n) +
                    "), got " + std::to_string(k));
  }

  DeterministicRng rng(options.seed);
  Matrix centroids(k, vectors.cols());
  auto seeds = kmeanspp_seeds(vectors, k, rng);
  for (std::size_t c = 0; c < k; ++c) {
    auto src = vectors.row(seeds[c]);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
  }

  KMeansResult result;
  auto assignments = assign_all(vectors, centroids);
  reseed_empty(vectors, assignments, centroids);
  result.distortion_trace.push_back(distortion(vectors, assignments, centroids));

  while (result.iterations < options.max_iters) {
    ++result.iterations;
    Matrix updated = cluster_means(vectors, assignments, centroids);
    double movement = max_movement(updated, centroids);
    centroids = std::move(updated);
    result.distortion_trace.push_back(distortion(vectors, assignments, centroids));

    auto next = assign_all(vectors, centroids);
    reseed_empty(vectors, next, centroids);
    bool changed = next != assignments;
    assignments = std::move(next);
    result.distortion_trace.push_back(distortion(vectors, assignments, centroids));

    if (movement < options.tol && !changed) {
      result.converged = true;
      break;
    }
  }

  result.distortion = distortion(vectors, assignments, centroids);
  result.assignments = std::move(assignments);
  result.centroids = std::move(centroids);
  return result;
}

}  // namespace masader
