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

#ifndef MSLP_PROXIMITY_H_
#define MSLP_PROXIMITY_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mslp/graph.h"
#include "mslp/linalg.h"
#include "mslp/msapprox.h"

namespace mslp {

enum class Measure { kKatz, kCommonNeighbors };

Measure parse_measure(const std::string& name);
std::string measure_name(Measure m);

struct ProximityConfig {
  Measure measure = Measure::kKatz;
  // Katz damping; 0 selects default_beta() for the graph at hand.
  double beta = 0.0;
  // Truncation tolerance for series-based Katz oracles.
  double tolerance = 1e-12;
  std::size_t max_terms = 100000;
};

// 0.5 / (20-step power estimate of ||A||_2).
double default_beta(const Graph& g);

// Largest |lambda| of A plus its residual, an upper bound on ||A||_2
// good to ~1e-8.
double spectral_radius_bound(const Graph& g);

// (I - beta S)^{-1} - I through the eigendecomposition of S.
DenseMatrix katz_core(const DenseMatrix& s, double beta);
DenseMatrix cn_core(const DenseMatrix& s);
// Dispatches on cfg.measure; cfg.beta must already be resolved.
DenseMatrix apply_measure(const DenseMatrix& s, const ProximityConfig& cfg);

// Row u of U f(S) U^T restricted to `candidates`.
std::vector<double> score_row(const LevelApproximation& la, const DenseMatrix& fs, NodeId u,
                              std::span<const NodeId> candidates);

struct KatzSeries {
  DenseMatrix scores;
  std::size_t terms = 0;
};

// sum_{k=1..L} beta^k A^k with L the first length whose geometric tail bound
// is below tol. Dense, for n <= 2000.
KatzSeries exact_katz(const Graph& g, double beta, double tol = 1e-12, std::size_t max_terms = 100000);

// Row u of the same series, computed with sparse products only.
std::vector<double> katz_series_row(const Graph& g, double beta, NodeId u, double radius_bound,
                                    double tol = 1e-12, std::size_t max_terms = 100000);

// Terms needed so that q^(L+1) / (1 - q) <= tol, q = beta * radius.
std::size_t katz_terms(double beta, double radius, double tol, std::size_t max_terms);

}  // namespace mslp

#endif  // MSLP_PROXIMITY_H_
