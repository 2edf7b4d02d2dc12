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

#include "mslp/error.h"
#include "mslp/methods.h"
#include "mslp/predict.h"
#include "oracles.h"

namespace mslp {
namespace {

class ConstantScorer final : public LinkScorer {
 public:
  std::vector<double> scores(NodeId, std::span<const NodeId> candidates) const override {
    return std::vector<double>(candidates.size(), 1.0);
  }
};

ProximityConfig katz(double beta) {
  ProximityConfig cfg;
  cfg.beta = beta;
  return cfg;
}

std::vector<NodeId> all_nodes(std::size_t n) {
  std::vector<NodeId> v(n);
  for (NodeId i = 0; i < n; ++i) v[i] = i;
  return v;
}

TEST(DefaultWeights, UniformOverDepth) {
  EXPECT_EQ(default_weights(0), (std::vector<double>{1.0}));
  EXPECT_EQ(default_weights(2), (std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_EQ(default_weights(4).size(), 5u);
}

TEST(MultiscaleScore, DepthZeroEqualsEigenBaseline) {
  const Graph g = testing::random_graph(70, 0.08, 1);
  const MultiScaleModel m = build_multiscale(g, HierarchyTree::single_cluster(70), 8);
  MethodConfig eig;
  eig.kind = MethodKind::kEigen;
  eig.rank = 8;
  eig.proximity = katz(0.05);
  const auto scorer = fit_method(eig, g);
  const auto cand = all_nodes(70);
  for (NodeId u = 0; u < 70; u += 9) {
    EXPECT_EQ(multiscale_score(m, katz(0.05), {1.0}, u, cand), scorer->scores(u, cand));
  }
}

TEST(MultiscaleScore, LeafOnlyWeightsEqualClra) {
  const Graph g = testing::random_graph(90, 0.06, 2);
  const HierarchyTree t = build_hierarchy(g, 2, 2, 3);
  const MultiScaleModel m = build_multiscale(g, t, 5);
  MethodConfig clra;
  clra.kind = MethodKind::kClra;
  clra.depth = 2;
  clra.rank = 5;
  clra.proximity = katz(0.05);
  const auto scorer = fit_method(clra, g, &t);
  const auto cand = all_nodes(90);
  for (NodeId u = 0; u < 90; u += 11) {
    EXPECT_EQ(multiscale_score(m, katz(0.05), {0.0, 0.0, 1.0}, u, cand), scorer->scores(u, cand));
  }
}

TEST(MultiscaleScore, WeightedSumOfLevels) {
  const Graph g = testing::random_graph(60, 0.1, 4);
  const MultiScaleModel m = build_multiscale(g, build_hierarchy(g, 2, 2, 0), 4);
  const std::vector<double> w{0.2, 0.3, 0.5};
  const auto p = MultiScalePredictor::from_model(m, katz(0.05), w);
  const auto cand = all_nodes(60);
  const auto levels = p.level_scores(7, cand);
  const auto combined = p.scores(7, cand);
  for (std::size_t i = 0; i < cand.size(); ++i) {
    EXPECT_NEAR(combined[i], 0.2 * levels[0][i] + 0.3 * levels[1][i] + 0.5 * levels[2][i], 1e-14);
  }
}

TEST(MultiscaleScore, RejectsBadWeights) {
  const Graph g = testing::random_graph(30, 0.2, 4);
  const MultiScaleModel m = build_multiscale(g, build_hierarchy(g, 1, 2, 0), 3);
  const NodeId cand[] = {1};
  EXPECT_THROW(multiscale_score(m, katz(0.05), {1.0}, 0, cand), InvalidArgument);
  EXPECT_THROW(multiscale_score(m, katz(0.05), {0.0, 0.0}, 0, cand), InvalidArgument);
  EXPECT_THROW(multiscale_score(m, katz(0.05), {1.0, -1.0}, 0, cand), InvalidArgument);
  EXPECT_THROW(multiscale_score(m, ProximityConfig{}, {1.0, 1.0}, 0, cand), InvalidArgument);
}

TEST(TopK, ScalingWeightsKeepsRanking) {
  const Graph g = testing::random_graph(120, 0.05, 6);
  const MultiScaleModel m = build_multiscale(g, build_hierarchy(g, 2, 2, 1), 5);
  const auto base = MultiScalePredictor::from_model(m, katz(0.05), default_weights(2));
  for (double gamma : {0.25, 2.0, 8.0}) {
    std::vector<double> w = default_weights(2);
    for (double& x : w) x *= gamma;
    const auto scaled = MultiScalePredictor::from_model(m, katz(0.05), w);
    for (NodeId u = 0; u < 120; u += 5) {
      for (auto policy : {CandidatePolicy::kTwoHop, CandidatePolicy::kAllNonNeighbors}) {
        EXPECT_EQ(top_k(base, g, u, 10, policy).candidates, top_k(scaled, g, u, 10, policy).candidates);
      }
    }
  }
}

TEST(TopK, NeverRecommendsSelfOrNeighborAndScoresDescend) {
  const Graph g = testing::random_graph(80, 0.08, 7);
  const MultiScaleModel m = build_multiscale(g, build_hierarchy(g, 2, 2, 1), 4);
  const auto p = MultiScalePredictor::from_model(m, katz(0.05), default_weights(2));
  for (NodeId u = 0; u < 80; ++u) {
    for (auto policy : {CandidatePolicy::kTwoHop, CandidatePolicy::kAllNonNeighbors}) {
      const Prediction pred = top_k(p, g, u, 15, policy);
      for (std::size_t i = 0; i < pred.candidates.size(); ++i) {
        EXPECT_NE(pred.candidates[i], u);
        EXPECT_FALSE(g.has_edge(u, pred.candidates[i]));
        if (i > 0) EXPECT_GE(pred.scores[i - 1], pred.scores[i]);
      }
    }
  }
}

TEST(TopK, ShortCandidateListsAndTies) {
  const Graph star = testing::make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const ConstantScorer constant;
  const Prediction p = top_k(constant, star, 3, 10);
  EXPECT_EQ(p.candidates, (std::vector<NodeId>{1, 2, 4}));
  EXPECT_EQ(top_k(constant, star, 3, 2).candidates, (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(top_k(constant, star, 3, 2).candidates, top_k(constant, star, 3, 2).candidates);
  EXPECT_THROW(top_k(constant, star, 3, 0), InvalidArgument);
  EXPECT_THROW(top_k(constant, star, 5, 1), InvalidArgument);
}

TEST(RankCandidates, OrdersByScoreThenId) {
  const NodeId cand[] = {9, 4, 7, 2};
  const double s[] = {0.5, 0.9, 0.5, 0.1};
  const Prediction p = rank_candidates(0, cand, s, 3);
  EXPECT_EQ(p.candidates, (std::vector<NodeId>{4, 7, 9}));
  EXPECT_EQ(p.scores, (std::vector<double>{0.9, 0.5, 0.5}));
  const double short_scores[] = {1.0};
  EXPECT_THROW(rank_candidates(0, cand, short_scores, 3), InvalidArgument);
}

TEST(CandidatePolicy, Names) {
  EXPECT_EQ(parse_candidate_policy("two_hop"), CandidatePolicy::kTwoHop);
  EXPECT_EQ(parse_candidate_policy(candidate_policy_name(CandidatePolicy::kAllNonNeighbors)),
            CandidatePolicy::kAllNonNeighbors);
  EXPECT_THROW(parse_candidate_policy("three_hop"), InvalidArgument);
  const Graph g = testing::path_graph(5);
  EXPECT_EQ(candidates_for(g, 0, CandidatePolicy::kTwoHop), (std::vector<NodeId>{2}));
  EXPECT_EQ(candidates_for(g, 0, CandidatePolicy::kAllNonNeighbors), (std::vector<NodeId>{2, 3, 4}));
}

TEST(Methods, EveryMethodFitsAndScoresDeterministically) {
  const Graph g = testing::random_graph(64, 0.1, 8);
  for (const auto& name : method_names()) {
    MethodConfig cfg;
    cfg.kind = parse_method(name);
    EXPECT_EQ(method_name(cfg.kind), name);
    cfg.depth = 2;
    cfg.rank = 4;
    const auto a = fit_method(cfg, g);
    const auto b = fit_method(cfg, g);
    const auto cand = non_neighbors(g, 5);
    const auto sa = a->scores(5, cand);
    EXPECT_EQ(sa, b->scores(5, cand)) << name;
    for (double x : sa) EXPECT_TRUE(std::isfinite(x)) << name;
  }
  EXPECT_THROW(parse_method("graclus"), InvalidArgument);
}

TEST(Methods, RandomScoresAreSymmetric) {
  const Graph g = testing::random_graph(30, 0.1, 8);
  MethodConfig cfg;
  cfg.kind = MethodKind::kRandom;
  const auto s = fit_method(cfg, g);
  const NodeId a[] = {9}, b[] = {4};
  EXPECT_EQ(s->scores(4, a), s->scores(9, b));
}

}  // namespace
}  // namespace mslp
