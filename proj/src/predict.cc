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

#include "mslp/predict.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "mslp/error.h"

namespace mslp {

CandidatePolicy parse_candidate_policy(const std::string& name) {
  if (name == "two_hop") return CandidatePolicy::kTwoHop;
  if (name == "all_non_neighbors") return CandidatePolicy::kAllNonNeighbors;
  throw InvalidArgument("unknown candidate policy '" + name + "' (expected two_hop or all_non_neighbors)");
}

std::string candidate_policy_name(CandidatePolicy p) {
  return p == CandidatePolicy::kTwoHop ? "two_hop" : "all_non_neighbors";
}

std::vector<NodeId> candidates_for(const Graph& g, NodeId u, CandidatePolicy policy) {
  return policy == CandidatePolicy::kTwoHop ? two_hop_candidates(g, u) : non_neighbors(g, u);
}

std::vector<double> default_weights(std::size_t depth) {
  if (depth == 0) return {1.0};
  return std::vector<double>(depth + 1, 1.0 / static_cast<double>(depth));
}

MultiScalePredictor::MultiScalePredictor(std::vector<LevelApproximation> levels, const ProximityConfig& cfg,
                                         std::vector<double> weights)
    : levels_(std::move(levels)), weights_(std::move(weights)) {
  if (levels_.empty()) throw InvalidArgument("predictor needs at least one level");
  if (weights_.size() != levels_.size()) {
    throw InvalidArgument("expected " + std::to_string(levels_.size()) + " weights, got " +
                          std::to_string(weights_.size()));
  }
  bool any = false;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw InvalidArgument("weights must be nonnegative");
    any = any || w > 0.0;
  }
  if (!any) throw InvalidArgument("weights must not all be zero");
  if (cfg.measure == Measure::kKatz && !(cfg.beta > 0.0)) throw InvalidArgument("Katz beta must be positive");
  cores_.resize(levels_.size());
  for (std::size_t p = 0; p < levels_.size(); ++p) {
    if (weights_[p] > 0.0) cores_[p] = apply_measure(levels_[p].core, cfg);
  }
}

MultiScalePredictor MultiScalePredictor::from_model(const MultiScaleModel& model, const ProximityConfig& cfg,
                                                    std::vector<double> weights) {
  std::vector<LevelApproximation> levels(model.levels().begin(), model.levels().end());
  return MultiScalePredictor(std::move(levels), cfg, std::move(weights));
}

std::vector<double> MultiScalePredictor::scores(NodeId u, std::span<const NodeId> candidates) const {
  std::vector<double> total(candidates.size(), 0.0);
  for (std::size_t p = 0; p < levels_.size(); ++p) {
    if (weights_[p] == 0.0) continue;
    const auto row = score_row(levels_[p], cores_[p], u, candidates);
    for (std::size_t i = 0; i < row.size(); ++i) total[i] += weights_[p] * row[i];
  }
  return total;
}

std::vector<std::vector<double>> MultiScalePredictor::level_scores(NodeId u,
                                                                   std::span<const NodeId> candidates) const {
  std::vector<std::vector<double>> out(levels_.size());
  for (std::size_t p = 0; p < levels_.size(); ++p) {
    out[p] = weights_[p] == 0.0 ? std::vector<double>(candidates.size(), 0.0)
                                : score_row(levels_[p], cores_[p], u, candidates);
  }
  return out;
}

std::vector<double> multiscale_score(const MultiScaleModel& model, const ProximityConfig& cfg,
                                     const std::vector<double>& weights, NodeId u,
                                     std::span<const NodeId> candidates) {
  return MultiScalePredictor::from_model(model, cfg, weights).scores(u, candidates);
}

Prediction rank_candidates(NodeId u, std::span<const NodeId> candidates, std::span<const double> scores,
                           std::size_t k) {
  if (candidates.size() != scores.size()) throw InvalidArgument("score count does not match candidate count");
  std::vector<std::size_t> idx(candidates.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return candidates[a] < candidates[b];
  };
  const std::size_t keep = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(), better);
  Prediction out;
  out.user = u;
  for (std::size_t i = 0; i < keep; ++i) {
    out.candidates.push_back(candidates[idx[i]]);
    out.scores.push_back(scores[idx[i]]);
  }
  return out;
}

Prediction top_k(const LinkScorer& scorer, const Graph& g, NodeId u, std::size_t k, CandidatePolicy policy) {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (!g.is_valid(u)) throw InvalidArgument("invalid node " + std::to_string(u));
  const auto cands = candidates_for(g, u, policy);
  const auto s = scorer.scores(u, cands);
  return rank_candidates(u, cands, s, k);
}

}  // namespace mslp
