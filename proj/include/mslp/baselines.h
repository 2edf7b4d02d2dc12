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

#ifndef MSLP_BASELINES_H_
#define MSLP_BASELINES_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mslp/graph.h"
#include "mslp/linalg.h"
#include "mslp/proximity.h"

namespace mslp {

enum class BaselineKind { kCommonNeighbors, kAdamicAdar, kPreferentialAttachment, kRandomWalkRestart, kKatz };

struct BaselineConfig {
  BaselineKind kind = BaselineKind::kCommonNeighbors;
  // Restart probability for random walk with restart.
  double restart = 0.15;
  double rwr_tolerance = 1e-10;
  std::size_t rwr_max_iterations = 1000;
  // Katz damping and truncation; beta 0 means default_beta(g).
  ProximityConfig katz;
};

// Stationary distribution of the walk that follows a uniformly chosen edge
// with probability 1 - restart and jumps back to u otherwise. Walkers at an
// isolated node return to u.
std::vector<double> random_walk_with_restart(const Graph& g, NodeId u, double restart, double tolerance = 1e-10,
                                             std::size_t max_iterations = 1000);

// Classical predictor bound to one graph. Katz precomputes a dense oracle
// for n <= 2000 and falls back to per-user truncated series otherwise.
class BaselineScorer {
 public:
  BaselineScorer(const Graph& g, BaselineConfig config);

  std::vector<double> scores(NodeId u, std::span<const NodeId> candidates) const;
  const BaselineConfig& config() const { return config_; }

 private:
  const Graph& g_;
  BaselineConfig config_;
  double radius_ = 0.0;
  DenseMatrix katz_;
};

std::vector<double> baseline_scores(const Graph& g, const BaselineConfig& config, NodeId u,
                                    std::span<const NodeId> candidates);

}  // namespace mslp

#endif  // MSLP_BASELINES_H_
