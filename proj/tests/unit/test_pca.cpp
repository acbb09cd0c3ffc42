#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "masader/pca.hpp"
#include "pca_oracle.hpp"

namespace {

using namespace masader;

std::vector<std::vector<double>> to_rows(const Matrix& m) {
  std::vector<std::vector<double>> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r].assign(m.row(r).begin(), m.row(r).end());
  return out;
}

// Points on a random plane through a random offset in 3-D.
std::vector<std::vector<double>> planar_points(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> u{g(rng), g(rng), g(rng)};
  std::vector<double> w{g(rng), g(rng), g(rng)};
  std::vector<double> o{g(rng) * 5, g(rng) * 5, g(rng) * 5};
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < n; ++i) {
    double a = g(rng) * 3, b = g(rng);
    pts.push_back({o[0] + a * u[0] + b * w[0], o[1] + a * u[1] + b * w[1], o[2] + a * u[2] + b * w[2]});
  }
  return pts;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

TEST(Jacobi, DiagonalisesKnownMatrix) {
  auto e = oracle::jacobi_eigen({{2, 1}, {1, 2}});
  EXPECT_NEAR(e.values[0], 3.0, 1e-12);
  EXPECT_NEAR(e.values[1], 1.0, 1e-12);
  EXPECT_NEAR(std::fabs(e.vectors[0][0]), std::sqrt(0.5), 1e-12);
}

TEST(Pca, PlanarPointsKeepPairwiseDistances) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto pts = planar_points(rng, 25);
    auto proj = to_rows(project_2d(Matrix::from_rows(pts)));
    auto ref = oracle::reference_project_2d(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        EXPECT_NEAR(dist(proj[i], proj[j]), dist(pts[i], pts[j]), 1e-9);
      }
      EXPECT_NEAR(proj[i][0], ref[i][0], 1e-9);
      EXPECT_NEAR(proj[i][1], ref[i][1], 1e-9);
    }
  }
}

TEST(Pca, ComponentsOrthogonalAndVarianceOrdered) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 3 + trial % 5;
    std::vector<std::vector<double>> pts(30, std::vector<double>(d));
    for (auto& p : pts)
      for (std::size_t j = 0; j < d; ++j) p[j] = g(rng) * static_cast<double>(j + 1);
    auto proj = to_rows(project_2d(Matrix::from_rows(pts)));
    double m0 = 0, m1 = 0, v0 = 0, v1 = 0, cov = 0;
    for (const auto& p : proj) {
      m0 += p[0];
      m1 += p[1];
    }
    m0 /= 30;
    m1 /= 30;
    for (const auto& p : proj) {
      v0 += (p[0] - m0) * (p[0] - m0);
      v1 += (p[1] - m1) * (p[1] - m1);
      cov += (p[0] - m0) * (p[1] - m1);
    }
    EXPECT_NEAR(m0, 0.0, 1e-9);
    EXPECT_NEAR(cov, 0.0, 1e-8 * v0);
    EXPECT_GE(v0, v1);
    auto ref = oracle::reference_project_2d(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_NEAR(proj[i][0], ref[i][0], 1e-9);
      EXPECT_NEAR(proj[i][1], ref[i][1], 1e-9);
    }
  }
}

TEST(Pca, DegenerateInputs) {
  auto one = project_2d(Matrix::from_rows({{1.0, 2.0, 3.0}}));
  EXPECT_EQ(one, Matrix(1, 2, 0.0));
  auto same = project_2d(Matrix::from_rows({{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}}));
  EXPECT_EQ(same, Matrix(3, 2, 0.0));
  auto line = project_2d(Matrix::from_rows({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}));
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(line(r, 1), 0.0);
  EXPECT_NEAR(line(2, 0) - line(0, 0), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(project_2d(Matrix()).rows(), 0u);
}

TEST(Pca, Deterministic) {
  std::mt19937_64 rng(3);
  auto pts = planar_points(rng, 40);
  auto m = Matrix::from_rows(pts);
  EXPECT_EQ(project_2d(m), project_2d(m));
}

}  // namespace
