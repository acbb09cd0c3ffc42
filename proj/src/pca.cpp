#include "masader/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace masader {

Matrix project_2d(const Matrix& vectors) {
  const std::size_t n = vectors.rows();
  const std::size_t d = vectors.cols();
  Matrix out(n, 2, 0.0);
  if (n == 0 || d == 0) return out;

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = vectors.row(i);
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  Eigen::MatrixXd centered(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = vectors.row(i);
    for (std::size_t j = 0; j < d; ++j) centered(i, j) = row[j] - mean[j];
  }
  if (n < 2) return out;

  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  // Eigenvalues come back in ascending order.
  const auto& values = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  const double top = std::max(values(d - 1), 0.0);
  const double floor = top * 1e-12;

  for (std::size_t comp = 0; comp < std::min<std::size_t>(2, d); ++comp) {
    const Eigen::Index col = static_cast<Eigen::Index>(d - 1 - comp);
    if (top <= 0.0 || values(col) <= floor) continue;
    Eigen::VectorXd axis = vecs.col(col);
    Eigen::Index lead = 0;
    for (Eigen::Index j = 1; j < axis.size(); ++j) {
      if (std::fabs(axis(j)) > std::fabs(axis(lead))) lead = j;
    }
    if (axis(lead) < 0) axis = -axis;
    Eigen::VectorXd scores = centered * axis;
    for (std::size_t i = 0; i < n; ++i) out(i, comp) = scores(static_cast<Eigen::Index>(i));
  }
  return out;
}

}  // namespace masader
