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

#include "mslp/baselines.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mslp/error.h"

namespace mslp {
namespace {

void check_user(const Graph& g, NodeId u, std::span<const NodeId> candidates) {
  if (!g.is_valid(u)) throw InvalidArgument("invalid node " + std::to_string(u));
  for (NodeId v : candidates) {
    if (!g.is_valid(v)) throw InvalidArgument("invalid candidate " + std::to_string(v));
  }
}

// Weighted two-step walk counts from u: acc[v] = sum_z A_uz A_zv.
std::vector<double> two_step(const Graph& g, NodeId u, bool adamic_adar) {
  std::vector<double> acc(g.num_nodes(), 0.0);
  const auto nu = g.neighbors(u);
  const auto wu = g.weights(u);
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const NodeId z = nu[i];
    const auto nz = g.neighbors(z);
    const auto wz = g.weights(z);
    if (adamic_adar) {
      const double w = 1.0 / std::log(static_cast<double>(std::max<std::size_t>(nz.size(), 2)));
      for (NodeId v : nz) acc[v] += w;
    } else {
      for (std::size_t j = 0; j < nz.size(); ++j) acc[nz[j]] += wu[i] * wz[j];
    }
  }
  return acc;
}

}  // namespace

std::vector<double> random_walk_with_restart(const Graph& g, NodeId u, double restart, double tolerance,
                                             std::size_t max_iterations) {
  if (!g.is_valid(u)) throw InvalidArgument("invalid node " + std::to_string(u));
  if (!(restart > 0.0 && restart < 1.0)) throw InvalidArgument("restart probability must lie in (0, 1)");
  const std::size_t n = g.num_nodes();
  std::vector<double> strength(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    for (double w : g.weights(v)) strength[v] += w;
  }
  std::vector<double> x(n, 0.0), next(n), scaled(n);
  x[u] = 1.0;
  double delta = 0.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    double dangling = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      if (strength[v] > 0.0) {
        scaled[v] = x[v] / strength[v];
      } else {
        scaled[v] = 0.0;
        dangling += x[v];
      }
    }
    spmv_into(g, scaled, next);
    for (auto& val : next) val *= 1.0 - restart;
    next[u] += restart + (1.0 - restart) * dangling;
    delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - x[i]);
    x.swap(next);
    if (delta <= tolerance) return x;
  }
  throw NumericalError("random walk with restart did not converge (L1 change " + std::to_string(delta) + ")",
                       {delta});
}

BaselineScorer::BaselineScorer(const Graph& g, BaselineConfig config) : g_(g), config_(std::move(config)) {
  if (config_.kind == BaselineKind::kRandomWalkRestart && !(config_.restart > 0.0 && config_.restart < 1.0)) {
    throw InvalidArgument("restart probability must lie in (0, 1)");
  }
  if (config_.kind != BaselineKind::kKatz) return;
  if (config_.katz.beta == 0.0) config_.katz.beta = default_beta(g_);
  if (g_.num_nodes() <= 2000) {
    katz_ = exact_katz(g_, config_.katz.beta, config_.katz.tolerance, config_.katz.max_terms).scores;
  } else {
    radius_ = spectral_radius_bound(g_);
    katz_terms(config_.katz.beta, radius_, config_.katz.tolerance, config_.katz.max_terms);
  }
}

std::vector<double> BaselineScorer::scores(NodeId u, std::span<const NodeId> candidates) const {
  check_user(g_, u, candidates);
  std::vector<double> out(candidates.size());
  switch (config_.kind) {
    case BaselineKind::kCommonNeighbors:
    case BaselineKind::kAdamicAdar: {
      const auto acc = two_step(g_, u, config_.kind == BaselineKind::kAdamicAdar);
      for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = acc[candidates[i]];
      break;
    }
    case BaselineKind::kPreferentialAttachment: {
      const double du = static_cast<double>(degree(g_, u));
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        out[i] = du * static_cast<double>(degree(g_, candidates[i]));
      }
      break;
    }
    case BaselineKind::kRandomWalkRestart: {
      const auto x = random_walk_with_restart(g_, u, config_.restart, config_.rwr_tolerance,
                                              config_.rwr_max_iterations);
      for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = x[candidates[i]];
      break;
    }
    case BaselineKind::kKatz: {
      if (katz_.size() > 0) {
        for (std::size_t i = 0; i < candidates.size(); ++i) {
          out[i] = katz_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(candidates[i]));
        }
      } else {
        const auto row = katz_series_row(g_, config_.katz.beta, u, radius_, config_.katz.tolerance,
                                         config_.katz.max_terms);
        for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = row[candidates[i]];
      }
      break;
    }
  }
  return out;
}

std::vector<double> baseline_scores(const Graph& g, const BaselineConfig& config, NodeId u,
                                    std::span<const NodeId> candidates) {
  return BaselineScorer(g, config).scores(u, candidates);
}

}  // namespace mslp
