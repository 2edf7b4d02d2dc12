// Copyright 2026 The MSLP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mslp/error.h"
#include "mslp/linalg.h"
#include "oracles.h"

namespace mslp {
namespace {

using testing::Dense;

DenseMatrix to_eigen(const Dense& a) {
  DenseMatrix m(a.size(), a.empty() ? 0 : a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) m(i, j) = a[i][j];
  }
  return m;
}

Dense random_symmetric(std::size_t m, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> normal;
  Dense a(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) a[i][j] = a[j][i] = normal(gen);
  }
  return a;
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> normal;
  DenseMatrix y(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) y(i, j) = normal(gen);
  }
  return y;
}

// Projector onto range(Y) from the normal equations, Y (Y^T Y)^{-1} Y^T.
Dense range_projector(const DenseMatrix& y) {
  const std::size_t rows = y.rows(), cols = y.cols();
  Dense yt_y(cols, std::vector<double>(cols, 0.0));
  for (std::size_t a = 0; a < cols; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      for (std::size_t i = 0; i < rows; ++i) yt_y[a][b] += y(i, a) * y(i, b);
    }
  }
  const Dense g = testing::inverse(yt_y);
  Dense p(rows, std::vector<double>(rows, 0.0));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < rows; ++j) {
      for (std::size_t a = 0; a < cols; ++a) {
        for (std::size_t b = 0; b < cols; ++b) p[i][j] += y(i, a) * g[a][b] * y(j, b);
      }
    }
  }
  return p;
}

void expect_residuals(const DenseMatrix& a, const EigenPairs& e) {
  const DenseMatrix& v = e.vectors.matrix();
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double res = (a * v.col(k) - e.values(k) * v.col(k)).norm();
    EXPECT_LE(res, 1e-8 * std::max(1.0, std::abs(e.values(k))));
    Eigen::Index imax;
    v.col(k).cwiseAbs().maxCoeff(&imax);
    EXPECT_GT(v(imax, k), 0.0);
  }
  EXPECT_LE(orthonormality_error(v), 1e-10);
}

TEST(Orthonormalize, Identity) {
  const OrthonormalBasis q = orthonormalize(DenseMatrix::Identity(3, 3));
  ASSERT_EQ(q.cols(), 3u);
  EXPECT_LE((q.matrix().cwiseAbs() - DenseMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Orthonormalize, RankDeficient) {
  DenseMatrix y = DenseMatrix::Zero(3, 2);
  y(0, 0) = 1.0;
  y(0, 1) = 2.0;
  const OrthonormalBasis q = orthonormalize(y);
  ASSERT_EQ(q.cols(), 1u);
  EXPECT_NEAR(std::abs(q.matrix()(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(q.matrix().col(0).tail(2).norm(), 0.0, 1e-12);
}

TEST(Orthonormalize, ZeroInputGivesEmptyBasis) {
  const OrthonormalBasis q = orthonormalize(DenseMatrix::Zero(4, 3));
  EXPECT_TRUE(q.is_empty());
  EXPECT_EQ(q.rows(), 4u);
}

TEST(Orthonormalize, RandomTallMatchesProjector) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const DenseMatrix y = random_matrix(50, 5, seed);
    const OrthonormalBasis q = orthonormalize(y);
    ASSERT_EQ(q.cols(), 5u);
    EXPECT_LE(orthonormality_error(q.matrix()), 1e-10);
    const Dense p = range_projector(y);
    const DenseMatrix qq = q.matrix() * q.matrix().transpose();
    double diff = 0.0;
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 50; ++j) diff = std::max(diff, std::abs(p[i][j] - qq(i, j)));
    }
    EXPECT_LE(diff, 1e-8);
  }
}

TEST(Orthonormalize, SquareAndIllConditionedInputs) {
  // Square input skips the Cholesky path; graded columns stress the fallback.
  DenseMatrix y = random_matrix(30, 30, 3);
  EXPECT_LE(orthonormality_error(orthonormalize(y).matrix()), 1e-10);
  DenseMatrix graded = random_matrix(200, 6, 4);
  for (int j = 0; j < 6; ++j) graded.col(j) *= std::pow(1e-2, j);
  const OrthonormalBasis q = orthonormalize(graded);
  EXPECT_EQ(q.cols(), 6u);
  EXPECT_LE(orthonormality_error(q.matrix()), 1e-10);
}

TEST(Orthonormalize, Idempotent) {
  const OrthonormalBasis q = orthonormalize(random_matrix(40, 4, 11));
  const OrthonormalBasis q2 = orthonormalize(q.matrix());
  ASSERT_EQ(q2.cols(), q.cols());
  for (Eigen::Index j = 0; j < 4; ++j) {
    EXPECT_NEAR(std::abs(q.matrix().col(j).dot(q2.matrix().col(j))), 1.0, 1e-10);
  }
}

TEST(OrthonormalBasis, AdoptRejectsNonOrthonormal) {
  DenseMatrix y = DenseMatrix::Ones(3, 2);
  EXPECT_THROW(OrthonormalBasis::adopt(y), NumericalError);
  EXPECT_NO_THROW(OrthonormalBasis::adopt(DenseMatrix::Identity(3, 2)));
}

TEST(SymmetricEig, K2) {
  const Graph g = testing::complete_graph(2);
  const EigenPairs e = symmetric_eig_top_r(GraphOperator(g), 1);
  ASSERT_EQ(e.values.size(), 1);
  EXPECT_NEAR(e.values(0), 1.0, 1e-12);
  EXPECT_NEAR(e.vectors.matrix()(0, 0), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(e.vectors.matrix()(1, 0), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(SymmetricEig, K3) {
  const EigenPairs e = symmetric_eig_top_r(GraphOperator(testing::complete_graph(3)), 1);
  EXPECT_NEAR(e.values(0), 2.0, 1e-12);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(e.vectors.matrix()(i, 0), 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(SymmetricEig, DiagonalMagnitudeOrder) {
  DenseMatrix d = DenseMatrix::Zero(3, 3);
  d.diagonal() << 5.0, -4.0, 1.0;
  for (std::size_t threshold : {512u, 0u}) {
    EigOptions opt;
    opt.dense_threshold = threshold;
    const EigenPairs e = symmetric_eig_top_r(DenseOperator(d), 2, opt);
    ASSERT_EQ(e.values.size(), 2);
    EXPECT_NEAR(e.values(0), 5.0, 1e-10);
    EXPECT_NEAR(e.values(1), -4.0, 1e-10);
    expect_residuals(d, e);
  }
}

TEST(SymmetricEig, RejectsBadRank) {
  const Graph g = testing::path_graph(4);
  EXPECT_THROW(symmetric_eig_top_r(GraphOperator(g), 0), InvalidArgument);
  EXPECT_THROW(symmetric_eig_top_r(GraphOperator(g), 5), InvalidArgument);
}

// Compares against the Jacobi oracle on both the dense and the Lanczos path.
TEST(SymmetricEig, MatchesJacobiOracle) {
  for (unsigned seed = 0; seed < 6; ++seed) {
    const std::size_t m = 20 + 16 * seed;
    const Dense a = random_symmetric(m, seed);
    const auto oracle = testing::jacobi_eigen(a);
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return std::abs(oracle.values[x]) > std::abs(oracle.values[y]);
    });
    const DenseMatrix am = to_eigen(a);
    for (std::size_t r : {std::size_t{1}, std::size_t{5}, m / 2}) {
      for (std::size_t threshold : {512u, 0u}) {
        EigOptions opt;
        opt.dense_threshold = threshold;
        const EigenPairs e = symmetric_eig_top_r(DenseOperator(am), r, opt);
        ASSERT_EQ(static_cast<std::size_t>(e.values.size()), r);
        expect_residuals(am, e);
        DenseMatrix ref(m, r);
        for (std::size_t k = 0; k < r; ++k) {
          EXPECT_NEAR(e.values(k), oracle.values[idx[k]], 1e-8);
          for (std::size_t i = 0; i < m; ++i) ref(i, k) = oracle.vectors[idx[k]][i];
        }
        const DenseVector cos = principal_angle_cosines(e.vectors, OrthonormalBasis::adopt(ref, 1e-8));
        EXPECT_GE(cos.minCoeff(), 1.0 - 1e-8) << "m=" << m << " r=" << r << " threshold=" << threshold;
      }
    }
  }
}

TEST(SymmetricEig, LanczosOnSparseGraph) {
  const Graph g = testing::random_graph(1500, 0.004, 5);
  const EigenPairs e = symmetric_eig_top_r(GraphOperator(g), 20);
  ASSERT_EQ(e.values.size(), 20);
  EXPECT_GT(e.restarts, 0u);
  for (int k = 1; k < 20; ++k) EXPECT_GE(std::abs(e.values(k - 1)), std::abs(e.values(k)) - 1e-12);
  for (std::size_t k = 0; k < 20; ++k) {
    DenseVector y;
    GraphOperator(g).apply(e.vectors.matrix().col(k), y);
    EXPECT_LE(e.residuals[k], 1e-8 * std::max(1.0, std::abs(e.values(k))));
    EXPECT_NEAR((y - e.values(k) * e.vectors.matrix().col(k)).norm(), e.residuals[k], 1e-9);
  }
  EXPECT_EQ(symmetric_eig_top_r(GraphOperator(g), 20).values, e.values);
}

TEST(SymmetricEigAll, MatchesOracle) {
  const Dense a = random_symmetric(12, 42);
  const auto oracle = testing::jacobi_eigen(a);
  const EigenPairs e = symmetric_eig_all(to_eigen(a));
  ASSERT_EQ(e.values.size(), 12);
  std::vector<double> got(e.values.data(), e.values.data() + 12);
  std::sort(got.begin(), got.end());
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(got[i], oracle.values[i], 1e-10);
}

TEST(PrincipalAngles, Examples) {
  const DenseMatrix e1 = DenseMatrix::Identity(3, 1);
  DenseMatrix e2 = DenseMatrix::Zero(3, 1);
  e2(1, 0) = 1.0;
  DenseMatrix diag = DenseMatrix::Zero(3, 1);
  diag(0, 0) = diag(1, 0) = 1.0 / std::sqrt(2.0);
  const auto u1 = OrthonormalBasis::adopt(e1);
  EXPECT_NEAR(principal_angle_cosines(u1, u1)(0), 1.0, 1e-15);
  EXPECT_NEAR(principal_angle_cosines(u1, OrthonormalBasis::adopt(e2))(0), 0.0, 1e-15);
  EXPECT_NEAR(principal_angle_cosines(u1, OrthonormalBasis::adopt(diag))(0), std::cos(M_PI / 4), 1e-12);
  EXPECT_THROW(principal_angle_cosines(u1, OrthonormalBasis::adopt(DenseMatrix::Identity(4, 1))), InvalidArgument);
}

TEST(PrincipalAngles, IdenticalRandomSubspaces) {
  const OrthonormalBasis q = orthonormalize(random_matrix(30, 6, 8));
  const DenseVector cos = principal_angle_cosines(q, q);
  ASSERT_EQ(cos.size(), 6);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(cos(i), 1.0, 1e-12);
}

TEST(Multiply, MatchesDenseProduct) {
  const Graph g = testing::random_graph(40, 0.2, 1);
  const Dense a = testing::dense_adjacency(g);
  const DenseMatrix x = random_matrix(40, 3, 2);
  const DenseMatrix y = multiply(g, x);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 40; ++k) s += a[i][k] * x(k, j);
      EXPECT_NEAR(y(i, j), s, 1e-12);
    }
  }
}

TEST(SpectralNorm, EstimateIsALowerBoundCloseToTruth) {
  const Graph g = testing::random_graph(80, 0.1, 6);
  const auto oracle = testing::jacobi_eigen(testing::dense_adjacency(g));
  const double truth = std::max(std::abs(oracle.values.front()), std::abs(oracle.values.back()));
  const double est = spectral_norm_estimate(g, 20);
  EXPECT_LE(est, truth * (1 + 1e-12));
  EXPECT_GE(est, 0.9 * truth);
}

}  // namespace
}  // namespace mslp
