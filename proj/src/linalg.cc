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

#include "mslp/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "mslp/error.h"
#include "mslp/random.h"

namespace mslp {
namespace {

// Relative size below which a projected column counts as dependent.
constexpr double kDropTolerance = 1e-12;
// Smallest accepted ratio of R diagonal entries for Cholesky QR.
constexpr double kCholeskyConditionLimit = 1e-6;

// Orders eigenvalue indices by descending magnitude, positive first on ties.
std::vector<Eigen::Index> magnitude_order(const DenseVector& values) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(values[a]);
    const double mb = std::abs(values[b]);
    if (ma != mb) return ma > mb;
    return values[a] > values[b];
  });
  return order;
}

void fix_signs(DenseMatrix& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (std::abs(v(i, j)) > best) {
        best = std::abs(v(i, j));
        arg = i;
      }
    }
    if (v(arg, j) < 0.0) v.col(j) = -v.col(j);
  }
}

std::vector<double> explicit_residuals(const SymmetricOperator& op, const DenseMatrix& v,
                                       const DenseVector& values) {
  std::vector<double> res(static_cast<std::size_t>(v.cols()));
  DenseVector av(v.rows());
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    op.apply(v.col(j), av);
    res[static_cast<std::size_t>(j)] = (av - values[j] * v.col(j)).norm();
  }
  return res;
}

bool residuals_within(const std::vector<double>& res, const DenseVector& values, double tol) {
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (!(res[i] <= tol * std::max(1.0, std::abs(values[static_cast<Eigen::Index>(i)])))) return false;
  }
  return true;
}

EigenPairs finish(const SymmetricOperator& op, DenseMatrix vectors, DenseVector values,
                  std::size_t restarts, const EigOptions& options) {
  fix_signs(vectors);
  EigenPairs out;
  out.residuals = explicit_residuals(op, vectors, values);
  if (!residuals_within(out.residuals, values, options.tolerance)) {
    throw NumericalError("eigensolver residual bound violated", out.residuals);
  }
  out.vectors = OrthonormalBasis::adopt(std::move(vectors), 1e-8);
  out.values = std::move(values);
  out.restarts = restarts;
  return out;
}

EigenPairs dense_top_r(const SymmetricOperator& op, std::size_t r, const EigOptions& options) {
  const auto m = static_cast<Eigen::Index>(op.size());
  DenseMatrix a(m, m);
  DenseVector e = DenseVector::Zero(m);
  DenseVector col(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    a.col(j) = col;
    e[j] = 0.0;
  }
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("dense symmetric eigensolver failed");
  const auto order = magnitude_order(solver.eigenvalues());
  DenseMatrix vectors(m, static_cast<Eigen::Index>(r));
  DenseVector values(static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < r; ++i) {
    vectors.col(static_cast<Eigen::Index>(i)) = solver.eigenvectors().col(order[i]);
    values[static_cast<Eigen::Index>(i)] = solver.eigenvalues()[order[i]];
  }
  return finish(op, std::move(vectors), std::move(values), 0, options);
}

DenseVector random_unit(Eigen::Index m, Rng& rng) {
  DenseVector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v[i] = 2.0 * rng.uniform() - 1.0;
  return v / v.norm();
}

// Thick-restart Lanczos. Every new direction is orthogonalized twice against
// the whole basis, so the projected matrix T = V^T A V is formed column by
// column from the Gram-Schmidt coefficients and the restart needs no
// special arrowhead bookkeeping.
EigenPairs lanczos_top_r(const SymmetricOperator& op, std::size_t r, const EigOptions& options) {
  const auto m = static_cast<Eigen::Index>(op.size());
  const auto want = static_cast<Eigen::Index>(r);
  const Eigen::Index kmax = std::min<Eigen::Index>(m, std::max<Eigen::Index>(4 * want, want + 20));
  const Eigen::Index keep = std::min<Eigen::Index>(kmax - 1, want + (kmax - want) / 2);
  const std::size_t max_restarts = options.max_restarts ? options.max_restarts : 50 * r;

  Rng rng(options.seed);
  DenseMatrix basis(m, kmax + 1);
  DenseMatrix t = DenseMatrix::Zero(kmax, kmax);
  basis.col(0) = random_unit(m, rng);

  DenseVector w(m);
  DenseVector h;
  Eigen::Index start = 0;
  std::vector<double> last_estimates;
  for (std::size_t cycle = 0; cycle <= max_restarts; ++cycle) {
    double beta = 0.0;
    for (Eigen::Index j = start; j < kmax; ++j) {
      op.apply(basis.col(j), w);
      const double anorm = w.norm();
      auto v = basis.leftCols(j + 1);
      h.noalias() = v.transpose() * w;
      w.noalias() -= v * h;
      DenseVector h2 = v.transpose() * w;
      w.noalias() -= v * h2;
      h += h2;
      t.col(j).head(j + 1) = h;
      t.row(j).head(j + 1) = h.transpose();
      beta = w.norm();
      if (beta > 1e-12 * std::max(anorm, 1e-300)) {
        basis.col(j + 1) = w / beta;
      } else {
        // Invariant subspace reached: continue from a fresh direction. The
        // coupling to it is zero, so the Lanczos relation still holds.
        beta = 0.0;
        DenseVector fresh = random_unit(m, rng);
        for (int pass = 0; pass < 2; ++pass) {
          fresh -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * fresh);
        }
        const double fn = fresh.norm();
        if (fn == 0.0 || j + 1 == m) {
          basis.col(j + 1).setZero();
        } else {
          basis.col(j + 1) = fresh / fn;
        }
      }
    }

    Eigen::SelfAdjointEigenSolver<DenseMatrix> small(t);
    if (small.info() != Eigen::Success) throw NumericalError("Lanczos projected eigensolve failed");
    const DenseVector& theta = small.eigenvalues();
    const DenseMatrix& s = small.eigenvectors();
    const auto order = magnitude_order(theta);

    last_estimates.assign(r, 0.0);
    bool converged = true;
    for (Eigen::Index i = 0; i < want; ++i) {
      const double est = std::abs(beta * s(kmax - 1, order[i]));
      last_estimates[static_cast<std::size_t>(i)] = est;
      if (est > 0.1 * options.tolerance * std::max(1.0, std::abs(theta[order[i]]))) converged = false;
    }

    if (converged || kmax == m) {
      DenseMatrix sel(kmax, want);
      DenseVector values(want);
      for (Eigen::Index i = 0; i < want; ++i) {
        sel.col(i) = s.col(order[i]);
        values[i] = theta[order[i]];
      }
      DenseMatrix vectors = basis.leftCols(kmax) * sel;
      auto res = explicit_residuals(op, vectors, values);
      if (residuals_within(res, values, options.tolerance)) {
        return finish(op, std::move(vectors), std::move(values), cycle, options);
      }
      if (kmax == m) throw NumericalError("Lanczos on full space missed the residual bound", res);
    }

    // Thick restart: keep the `keep` dominant Ritz vectors, append the
    // residual direction.
    DenseMatrix sel(kmax, keep);
    for (Eigen::Index i = 0; i < keep; ++i) sel.col(i) = s.col(order[i]);
    DenseMatrix ritz = basis.leftCols(kmax) * sel;
    basis.col(keep) = basis.col(kmax);
    basis.leftCols(keep) = ritz;
    t.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) t(i, i) = theta[order[i]];
    start = keep;
  }
  throw NumericalError("Lanczos did not converge after " + std::to_string(max_restarts) + " restarts",
                       last_estimates);
}

// Q with Q R = Y and R upper triangular with positive diagonal, or nullopt
// when Y is too ill-conditioned for the Gram matrix route.
std::optional<DenseMatrix> cholesky_qr2(const DenseMatrix& y) {
  DenseMatrix q = y;
  for (int pass = 0; pass < 2; ++pass) {
    DenseMatrix gram = DenseMatrix::Zero(q.cols(), q.cols());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(q.transpose());
    Eigen::LLT<DenseMatrix> llt(gram);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const DenseVector diag = llt.matrixLLT().diagonal();
    if (pass == 0 && !(diag.minCoeff() > kCholeskyConditionLimit * diag.maxCoeff())) return std::nullopt;
    const DenseMatrix r_inv =
        llt.matrixU().solve(DenseMatrix::Identity(q.cols(), q.cols())).triangularView<Eigen::Upper>();
    q = (q * r_inv).eval();
  }
  return q;
}

}  // namespace

double orthonormality_error(const DenseMatrix& q) {
  if (q.cols() == 0) return 0.0;
  DenseMatrix g = q.transpose() * q;
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

OrthonormalBasis OrthonormalBasis::adopt(DenseMatrix q, double tolerance) {
  OrthonormalBasis b;
  b.orthonormality_error_ = mslp::orthonormality_error(q);
  if (!(b.orthonormality_error_ <= tolerance)) {
    throw NumericalError("basis columns are not orthonormal (error " +
                         std::to_string(b.orthonormality_error_) + ")");
  }
  b.q_ = std::move(q);
  return b;
}

OrthonormalBasis OrthonormalBasis::empty(std::size_t rows) {
  OrthonormalBasis b;
  b.q_ = DenseMatrix(static_cast<Eigen::Index>(rows), 0);
  return b;
}

OrthonormalBasis orthonormalize(const DenseMatrix& y) {
  if (y.rows() == 0 || y.cols() == 0) throw InvalidArgument("orthonormalize: empty input");
  if (!y.allFinite()) throw NumericalError("orthonormalize: non-finite input");
  const double max_norm = y.colwise().norm().maxCoeff();
  if (max_norm == 0.0) return OrthonormalBasis::empty(static_cast<std::size_t>(y.rows()));
  const double drop = kDropTolerance * max_norm;

  // Tall and well conditioned: two rounds of Cholesky QR, all BLAS-3.
  if (y.rows() >= 4 * y.cols()) {
    if (auto q = cholesky_qr2(y)) {
      const double err = mslp::orthonormality_error(*q);
      if (err <= 1e-12) {
        OrthonormalBasis b;
        b.q_ = std::move(*q);
        b.orthonormality_error_ = err;
        return b;
      }
    }
  }

  // Householder QR without pivoting keeps column order; |R_jj| is then the
  // distance of column j from the span of the earlier ones. If no column is
  // dependent the thin Q is the answer.
  if (y.cols() <= y.rows()) {
    Eigen::HouseholderQR<DenseMatrix> qr(y);
    const auto& packed = qr.matrixQR();
    bool full_rank = true;
    for (Eigen::Index j = 0; j < y.cols(); ++j) full_rank = full_rank && std::abs(packed(j, j)) > drop;
    if (full_rank) {
      DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(y.rows(), y.cols());
      for (Eigen::Index j = 0; j < y.cols(); ++j) {
        if (packed(j, j) < 0.0) q.col(j) = -q.col(j);
      }
      return OrthonormalBasis::adopt(std::move(q));
    }
  }

  // Rank-deficient: classical Gram-Schmidt with a second pass, dropping
  // columns whose projected norm vanishes.
  DenseMatrix q(y.rows(), std::min(y.rows(), y.cols()));
  Eigen::Index kept = 0;
  DenseVector v(y.rows());
  for (Eigen::Index j = 0; j < y.cols() && kept < q.cols(); ++j) {
    v = y.col(j);
    for (int pass = 0; pass < 2 && kept > 0; ++pass) {
      DenseVector h = q.leftCols(kept).transpose() * v;
      v.noalias() -= q.leftCols(kept) * h;
    }
    const double nv = v.norm();
    if (nv <= drop) continue;
    q.col(kept++) = v / nv;
  }
  DenseMatrix out = q.leftCols(kept);
  return OrthonormalBasis::adopt(std::move(out));
}

EigenPairs symmetric_eig_top_r(const SymmetricOperator& op, std::size_t r, const EigOptions& options) {
  const std::size_t m = op.size();
  if (r < 1 || r > m) {
    throw InvalidArgument("symmetric_eig_top_r: need 1 <= r <= " + std::to_string(m) + ", got " +
                          std::to_string(r));
  }
  if (m <= options.dense_threshold) return dense_top_r(op, r, options);
  return lanczos_top_r(op, r, options);
}

EigenPairs symmetric_eig_all(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("symmetric_eig_all: matrix must be square");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("dense symmetric eigensolver failed");
  DenseMatrix v = solver.eigenvectors();
  fix_signs(v);
  EigenPairs out;
  out.values = solver.eigenvalues();
  out.vectors = OrthonormalBasis::adopt(std::move(v), 1e-8);
  return out;
}

DenseVector principal_angle_cosines(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  if (a.rows() != b.rows()) throw InvalidArgument("principal_angle_cosines: row dimension mismatch");
  if (a.is_empty() || b.is_empty()) return DenseVector(0);
  DenseMatrix c = a.matrix().transpose() * b.matrix();
  Eigen::JacobiSVD<DenseMatrix> svd(c);
  DenseVector s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::clamp(s[i], 0.0, 1.0);
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  return s;
}

void GraphOperator::apply(const DenseVector& x, DenseVector& y) const {
  y.resize(x.size());
  spmv_into(g_, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
            std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
}

DenseMatrix multiply(const Graph& g, const DenseMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != g.num_nodes()) {
    throw InvalidArgument("multiply: row count does not match node count");
  }
  DenseMatrix y(x.rows(), x.cols());
  const auto offsets = g.row_offsets();
  const auto cols = g.column_indices();
  const auto vals = g.values();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double* xc = x.col(j).data();
    double* yc = y.col(j).data();
    for (std::size_t u = 0; u < g.num_nodes(); ++u) {
      double acc = 0.0;
      for (auto k = offsets[u]; k < offsets[u + 1]; ++k) acc += vals[k] * xc[cols[k]];
      yc[u] = acc;
    }
  }
  return y;
}

double spectral_norm_estimate(const Graph& g, int iterations) {
  const std::size_t n = g.num_nodes();
  if (n == 0) return 0.0;
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    spmv_into(g, x, y);
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    estimate = norm;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
  }
  return estimate;
}

}  // namespace mslp
