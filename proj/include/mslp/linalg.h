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

#ifndef MSLP_LINALG_H_
#define MSLP_LINALG_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mslp/graph.h"

namespace mslp {

using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;

// Matrix-free symmetric linear map on R^size(). Symmetry is the caller's
// contract; nothing here checks it.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;
  virtual std::size_t size() const = 0;
  virtual void apply(const DenseVector& x, DenseVector& y) const = 0;
};

class GraphOperator final : public SymmetricOperator {
 public:
  explicit GraphOperator(const Graph& g) : g_(g) {}
  std::size_t size() const override { return g_.num_nodes(); }
  void apply(const DenseVector& x, DenseVector& y) const override;

 private:
  const Graph& g_;
};

class DenseOperator final : public SymmetricOperator {
 public:
  explicit DenseOperator(const DenseMatrix& a) : a_(a) {}
  std::size_t size() const override { return static_cast<std::size_t>(a_.rows()); }
  void apply(const DenseVector& x, DenseVector& y) const override { y.noalias() = a_ * x; }

 private:
  const DenseMatrix& a_;
};

// Matrix with orthonormal columns. The measured max-abs deviation of Q^T Q
// from the identity is recorded at construction.
class OrthonormalBasis {
 public:
  static constexpr double kTolerance = 1e-10;

  OrthonormalBasis() = default;

  // Takes ownership of `q`; throws NumericalError when its columns are not
  // orthonormal to `tolerance`.
  static OrthonormalBasis adopt(DenseMatrix q, double tolerance = kTolerance);
  // Empty basis with `rows` rows and no columns.
  static OrthonormalBasis empty(std::size_t rows);

  const DenseMatrix& matrix() const { return q_; }
  std::size_t rows() const { return static_cast<std::size_t>(q_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(q_.cols()); }
  bool is_empty() const { return q_.cols() == 0; }
  double orthonormality_error() const { return orthonormality_error_; }

  DenseMatrix release() && { return std::move(q_); }

 private:
  friend OrthonormalBasis orthonormalize(const DenseMatrix& y);

  DenseMatrix q_;
  double orthonormality_error_ = 0.0;
};

double orthonormality_error(const DenseMatrix& q);

// Orthonormal basis for range(y), preserving column order. Columns that are
// numerically dependent on earlier ones are dropped, so the result may be
// narrower than `y`; an all-zero `y` gives an empty basis.
OrthonormalBasis orthonormalize(const DenseMatrix& y);

struct EigOptions {
  // Relative residual bound: ||A v - lambda v|| <= tol * max(1, |lambda|).
  double tolerance = 1e-8;
  // Operators up to this size are materialized and solved directly.
  std::size_t dense_threshold = 512;
  // Lanczos restart cycles; 0 means 50 * r.
  std::size_t max_restarts = 0;
  std::uint64_t seed = 0x6d736c70;
};

struct EigenPairs {
  OrthonormalBasis vectors;
  // Sorted by descending |lambda|; positive first on ties.
  DenseVector values;
  // Explicit ||A v - lambda v|| for each returned pair.
  std::vector<double> residuals;
  // Lanczos restart cycles used (0 on the dense path).
  std::size_t restarts = 0;
};

// The r eigenpairs of largest magnitude. Each eigenvector's largest-magnitude
// component is made positive. Small operators are solved densely; larger
// ones with thick-restart Lanczos and full reorthogonalization. Throws
// NumericalError carrying residuals if the bound cannot be met.
EigenPairs symmetric_eig_top_r(const SymmetricOperator& op, std::size_t r,
                               const EigOptions& options = {});

// Complete decomposition of a dense symmetric matrix, ascending eigenvalues.
EigenPairs symmetric_eig_all(const DenseMatrix& a);

// Cosines of the principal angles between span(a) and span(b), descending,
// clamped to [0, 1].
DenseVector principal_angle_cosines(const OrthonormalBasis& a, const OrthonormalBasis& b);

// Y = A X for a sparse symmetric A.
DenseMatrix multiply(const Graph& g, const DenseMatrix& x);

// Power-method estimate of ||A||_2 from a deterministic start vector; never
// exceeds the true norm for nonnegative A.
double spectral_norm_estimate(const Graph& g, int iterations = 20);

}  // namespace mslp

#endif  // MSLP_LINALG_H_
