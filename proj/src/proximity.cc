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

#include "mslp/proximity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mslp/error.h"

namespace mslp {

Measure parse_measure(const std::string& name) {
  if (name == "katz") return Measure::kKatz;
  if (name == "cn") return Measure::kCommonNeighbors;
  throw InvalidArgument("unknown proximity measure '" + name + "' (expected katz or cn)");
}

std::string measure_name(Measure m) { return m == Measure::kKatz ? "katz" : "cn"; }

double default_beta(const Graph& g) {
  const double norm = spectral_norm_estimate(g, 20);
  if (norm <= 0.0) throw InvalidArgument("graph has no edges; Katz damping is undefined");
  return 0.5 / norm;
}

double spectral_radius_bound(const Graph& g) {
  if (g.nnz() == 0) return 0.0;
  EigOptions opt;
  opt.tolerance = 1e-10;
  const auto top = symmetric_eig_top_r(GraphOperator(g), 1, opt);
  return std::abs(top.values[0]) + top.residuals[0] + 1e-12;
}

DenseMatrix katz_core(const DenseMatrix& s, double beta) {
  if (s.rows() != s.cols()) throw InvalidArgument("katz_core: core must be square");
  if (!(beta >= 0.0)) throw InvalidArgument("katz_core: beta must be nonnegative");
  if (s.rows() == 0 || beta == 0.0) return DenseMatrix::Zero(s.rows(), s.cols());
  const auto eig = symmetric_eig_all(0.5 * (s + s.transpose()));
  DenseVector damped(eig.values.size());
  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double bl = beta * eig.values[i];
    if (bl >= 1.0) {
      throw NumericalError("Katz damping too large: beta * lambda = " + std::to_string(bl) +
                           " >= 1; choose beta < " + std::to_string(1.0 / eig.values[i]));
    }
    min_gap = std::min(min_gap, 1.0 - bl);
    damped[i] = bl / (1.0 - bl);
  }
  double max_gap = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) max_gap = std::max(max_gap, 1.0 - beta * eig.values[i]);
  if (max_gap / min_gap > 1e12) {
    throw NumericalError("I - beta S is ill-conditioned (condition estimate " + std::to_string(max_gap / min_gap) +
                         "); use a smaller beta");
  }
  const DenseMatrix& v = eig.vectors.matrix();
  DenseMatrix out = v * damped.asDiagonal() * v.transpose();
  return 0.5 * (out + out.transpose());
}

DenseMatrix cn_core(const DenseMatrix& s) { return s * s; }

DenseMatrix apply_measure(const DenseMatrix& s, const ProximityConfig& cfg) {
  if (cfg.measure == Measure::kKatz && !(cfg.beta > 0.0)) {
    throw InvalidArgument("Katz damping must be resolved to a positive value before use");
  }
  return cfg.measure == Measure::kKatz ? katz_core(s, cfg.beta) : cn_core(s);
}

std::vector<double> score_row(const LevelApproximation& la, const DenseMatrix& fs, NodeId u,
                              std::span<const NodeId> candidates) {
  std::vector<double> scores(candidates.size(), 0.0);
  if (candidates.empty()) return scores;
  const auto [a, i] = la.locate(u);
  const auto& ua = la.bases[a].matrix();
  if (ua.cols() == 0) return scores;
  // t = U_a[i, :] * f(S)[a rows, :]
  const DenseVector t = fs.middleRows(static_cast<Eigen::Index>(la.core_offsets[a]), ua.cols()).transpose() *
                        ua.row(static_cast<Eigen::Index>(i)).transpose();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto [b, j] = la.locate(candidates[c]);
    const auto& ub = la.bases[b].matrix();
    if (ub.cols() == 0) continue;
    scores[c] = ub.row(static_cast<Eigen::Index>(j)).dot(t.segment(static_cast<Eigen::Index>(la.core_offsets[b]), ub.cols()));
  }
  return scores;
}

std::size_t katz_terms(double beta, double radius, double tol, std::size_t max_terms) {
  const double q = beta * radius;
  if (!(q < 1.0)) {
    throw NumericalError("Katz series diverges: beta * ||A||_2 = " + std::to_string(q) + " >= 1");
  }
  if (q == 0.0) return 1;
  std::size_t terms = 1;
  double tail = q * q / (1.0 - q);
  while (tail > tol) {
    if (++terms > max_terms) throw NumericalError("Katz series needs more than " + std::to_string(max_terms) + " terms");
    tail *= q;
  }
  return terms;
}

KatzSeries exact_katz(const Graph& g, double beta, double tol, std::size_t max_terms) {
  const std::size_t n = g.num_nodes();
  if (n > 2000) throw InvalidArgument("exact_katz is limited to n <= 2000");
  if (!(beta >= 0.0)) throw InvalidArgument("exact_katz: beta must be nonnegative");
  KatzSeries out;
  out.scores = DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (beta == 0.0 || g.nnz() == 0) return out;
  out.terms = katz_terms(beta, spectral_radius_bound(g), tol, max_terms);
  DenseMatrix term = DenseMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < out.terms; ++k) {
    term = beta * multiply(g, term);
    out.scores += term;
  }
  out.scores = 0.5 * (out.scores + out.scores.transpose()).eval();
  return out;
}

std::vector<double> katz_series_row(const Graph& g, double beta, NodeId u, double radius_bound, double tol,
                                    std::size_t max_terms) {
  if (!g.is_valid(u)) throw InvalidArgument("katz_series_row: invalid node");
  const std::size_t n = g.num_nodes();
  std::vector<double> sum(n, 0.0);
  if (beta == 0.0 || g.nnz() == 0) return sum;
  const std::size_t terms = katz_terms(beta, radius_bound, tol, max_terms);
  std::vector<double> x(n, 0.0), y(n);
  x[u] = 1.0;
  for (std::size_t k = 0; k < terms; ++k) {
    spmv_into(g, x, y);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = beta * y[i];
      sum[i] += x[i];
    }
  }
  return sum;
}

}  // namespace mslp
