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

#ifndef MSLP_PREDICT_H_
#define MSLP_PREDICT_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mslp/graph.h"
#include "mslp/linalg.h"
#include "mslp/msapprox.h"
#include "mslp/proximity.h"

namespace mslp {

// Anything that scores candidate links for a user.
class LinkScorer {
 public:
  virtual ~LinkScorer() = default;
  virtual std::vector<double> scores(NodeId u, std::span<const NodeId> candidates) const = 0;
};

enum class CandidatePolicy { kTwoHop, kAllNonNeighbors };

CandidatePolicy parse_candidate_policy(const std::string& name);
std::string candidate_policy_name(CandidatePolicy p);

std::vector<NodeId> candidates_for(const Graph& g, NodeId u, CandidatePolicy policy);

// w_i = 1/l for every level 0..l; [1] when l = 0.
std::vector<double> default_weights(std::size_t depth);

// Weighted sum of per-level low-rank proximities.
class MultiScalePredictor final : public LinkScorer {
 public:
  // cfg.beta must be resolved (> 0) for Katz.
  MultiScalePredictor(std::vector<LevelApproximation> levels, const ProximityConfig& cfg,
                      std::vector<double> weights);
  static MultiScalePredictor from_model(const MultiScaleModel& model, const ProximityConfig& cfg,
                                        std::vector<double> weights);

  std::vector<double> scores(NodeId u, std::span<const NodeId> candidates) const override;
  // One row per level, unweighted.
  std::vector<std::vector<double>> level_scores(NodeId u, std::span<const NodeId> candidates) const;

  std::size_t num_levels() const { return levels_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const DenseMatrix& core_function(std::size_t level) const { return cores_.at(level); }

 private:
  std::vector<LevelApproximation> levels_;
  std::vector<DenseMatrix> cores_;
  std::vector<double> weights_;
};

std::vector<double> multiscale_score(const MultiScaleModel& model, const ProximityConfig& cfg,
                                     const std::vector<double>& weights, NodeId u,
                                     std::span<const NodeId> candidates);

struct Prediction {
  NodeId user = 0;
  std::vector<NodeId> candidates;
  std::vector<double> scores;
};

// Candidates sorted by descending score, ascending id on ties; keeps at
// most k.
Prediction rank_candidates(NodeId u, std::span<const NodeId> candidates, std::span<const double> scores,
                           std::size_t k);

Prediction top_k(const LinkScorer& scorer, const Graph& g, NodeId u, std::size_t k,
                 CandidatePolicy policy = CandidatePolicy::kTwoHop);

}  // namespace mslp

#endif  // MSLP_PREDICT_H_
