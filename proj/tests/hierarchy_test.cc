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

#include <filesystem>
#include <random>

#include "mslp/error.h"
#include "mslp/generators.h"
#include "mslp/hierarchy.h"
#include "oracles.h"

namespace mslp {
namespace {

using testing::make_graph;

// Exhaustive parent check: cluster k at level p+1 lies inside cluster k / c.
void expect_nested(const HierarchyTree& t) {
  const std::size_t c = t.branching();
  std::size_t clusters = 1;
  for (std::size_t p = 0; p <= t.depth(); ++p) {
    std::vector<std::size_t> sizes(clusters, 0);
    for (std::size_t u = 0; u < t.num_nodes(); ++u) {
      const ClusterId k = t.level(p)[u];
      ASSERT_LT(k, clusters);
      ++sizes[k];
      if (p > 0) ASSERT_EQ(t.level(p - 1)[u], k / c);
    }
    for (std::size_t s : sizes) ASSERT_GT(s, 0u);
    clusters *= c;
  }
  const auto order = t.leaf_order();
  for (std::size_t p = 0; p <= t.depth(); ++p) {
    const auto off = t.cluster_offsets(p);
    for (std::size_t k = 0; k + 1 < off.size(); ++k) {
      for (std::size_t i = off[k]; i < off[k + 1]; ++i) ASSERT_EQ(t.level(p)[order[i]], k);
    }
    ASSERT_EQ(off.back(), t.num_nodes());
  }
}

SbmParams sbm_params(std::size_t blocks, std::size_t size, double p_in, double p_out, std::uint64_t seed) {
  SbmParams params;
  params.block_sizes.assign(blocks, size);
  params.p_in = p_in;
  params.p_out = p_out;
  params.seed = seed;
  return params;
}

TEST(WithinClusterFraction, Examples) {
  const Graph k4 = testing::complete_graph(4);
  const std::vector<ClusterId> one(4, 0);
  EXPECT_DOUBLE_EQ(within_cluster_fraction(k4, one), 1.0);
  const std::vector<ClusterId> split{0, 0, 1, 1};
  EXPECT_NEAR(within_cluster_fraction(k4, split), 2.0 / 6.0, 1e-15);
  const std::vector<ClusterId> comps{0, 0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(within_cluster_fraction(testing::two_triangles(), comps), 1.0);
}

TEST(BuildHierarchy, TwoTrianglesSplitByComponent) {
  const HierarchyTree t = build_hierarchy(testing::two_triangles(), 1, 2, 1);
  expect_nested(t);
  EXPECT_DOUBLE_EQ(within_cluster_fraction(testing::two_triangles(), t.leaves()), 1.0);
}

TEST(BuildHierarchy, K2) {
  const HierarchyTree t = build_hierarchy(make_graph(2, {{0, 1}}), 1, 2, 0);
  EXPECT_NE(t.leaves()[0], t.leaves()[1]);
}

TEST(BuildHierarchy, RejectsTooManyLeaves) {
  EXPECT_THROW(build_hierarchy(testing::path_graph(7), 3, 2, 0), InvalidArgument);
  EXPECT_THROW(build_hierarchy(testing::path_graph(7), 0, 2, 0), InvalidArgument);
  EXPECT_THROW(build_hierarchy(testing::path_graph(7), 1, 1, 0), InvalidArgument);
}

TEST(BuildHierarchy, EdgelessAndSparseGraphsStillFillEveryCluster) {
  const Graph empty = Graph::from_edges(9, {});
  expect_nested(build_hierarchy(empty, 3, 2, 0));
  const Graph sparse = make_graph(12, {{0, 1}, {2, 3}});
  expect_nested(build_hierarchy(sparse, 2, 3, 4));
}

TEST(BuildHierarchy, NestedMinimumShareAndMonotone) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Graph g = testing::random_graph(300, 0.03, static_cast<unsigned>(seed));
    for (std::size_t c : {2u, 3u}) {
      const HierarchyTree t = build_hierarchy(g, 3, c, seed);
      expect_nested(t);
      for (std::size_t p = 1; p <= t.depth(); ++p) {
        const auto parent = t.cluster_offsets(p - 1);
        const auto child = t.cluster_offsets(p);
        for (std::size_t k = 0; k + 1 < child.size(); ++k) {
          const std::size_t parent_size = parent[k / c + 1] - parent[k / c];
          EXPECT_GE(static_cast<double>(child[k + 1] - child[k]), 0.1 * static_cast<double>(parent_size) - 1e-9);
        }
      }
      const auto frac = within_cluster_fractions(g, t);
      for (std::size_t p = 1; p < frac.size(); ++p) EXPECT_LE(frac[p], frac[p - 1]);
    }
  }
}

TEST(BuildHierarchy, Deterministic) {
  const Graph g = testing::random_graph(200, 0.04, 9);
  EXPECT_EQ(build_hierarchy(g, 2, 2, 5), build_hierarchy(g, 2, 2, 5));
}

TEST(BuildHierarchy, BeatsRandomOnPlantedBlocks) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SbmParams params = sbm_params(8, 60, 0.2, 0.01, seed);
    const Graph g = sbm_temporal(params).train;
    const auto blocks = sbm_blocks(params);
    std::vector<ClusterId> planted(blocks.begin(), blocks.end());
    const auto built = within_cluster_fractions(g, build_hierarchy(g, 3, 2, seed));
    const auto random = within_cluster_fractions(g, random_hierarchy(g, 3, 2, seed));
    for (std::size_t p = 1; p <= 3; ++p) EXPECT_GT(built[p], random[p]) << "seed " << seed << " level " << p;
    EXPECT_GT(built[3], 0.85 * within_cluster_fraction(g, planted));
  }
}

TEST(RandomHierarchy, BalancedAndDeterministic) {
  const Graph g = testing::path_graph(4);
  const HierarchyTree t = random_hierarchy(g, 1, 2, 3);
  const auto off = t.cluster_offsets(1);
  EXPECT_EQ(off, (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_EQ(t, random_hierarchy(g, 1, 2, 3));
  EXPECT_THROW(random_hierarchy(g, 3, 2, 3), InvalidArgument);
}

TEST(RandomHierarchy, ExpectedWithinFractionOnErdosRenyi) {
  for (std::size_t c : {2u, 4u}) {
    double sum = 0.0;
    const int trials = 20;
    for (int s = 0; s < trials; ++s) {
      const Graph g = testing::random_graph(400, 0.05, static_cast<unsigned>(100 + s));
      const HierarchyTree t = random_hierarchy(g, 1, c, static_cast<std::uint64_t>(s));
      expect_nested(t);
      sum += within_cluster_fraction(g, t.leaves());
    }
    EXPECT_NEAR(sum / trials, 1.0 / static_cast<double>(c), 0.05);
  }
}

TEST(ShuffleLeaves, Counts) {
  const Graph g = testing::random_graph(100, 0.05, 2);
  const HierarchyTree t = build_hierarchy(g, 2, 2, 0);
  EXPECT_EQ(shuffle_leaves(t, 0.0, 7), t);
  EXPECT_EQ(shuffle_leaves(t, 1.0, 7), shuffle_leaves(t, 1.0, 7));
  const HierarchyTree s = shuffle_leaves(t, 0.1, 7);
  expect_nested(s);
  std::size_t changed = 0;
  for (std::size_t u = 0; u < 100; ++u) changed += t.leaves()[u] != s.leaves()[u];
  EXPECT_EQ(changed, 10u);
  EXPECT_THROW(shuffle_leaves(t, 1.5, 7), InvalidArgument);
}

TEST(HierarchyTree, FromLevelsValidates) {
  EXPECT_THROW(HierarchyTree::from_levels({{0, 0, 0}, {0, 1, 2}}, 2), InvalidArgument);
  EXPECT_THROW(HierarchyTree::from_levels({{0, 0, 0}, {0, 0, 0}}, 2), InvalidArgument);
  EXPECT_THROW(HierarchyTree::from_levels({{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 2, 3, 1}}, 2), InvalidArgument);
  const HierarchyTree t = HierarchyTree::from_levels({{0, 0, 0, 0}, {1, 0, 1, 0}, {3, 0, 2, 1}}, 2);
  expect_nested(t);
  EXPECT_EQ(t.leaf_order(), (std::vector<NodeId>{1, 3, 2, 0}));
  EXPECT_EQ(HierarchyTree::from_leaves(t.leaves(), 2, 2), t);
}

TEST(HierarchyTree, SaveLoadRoundTrip) {
  const Graph g = testing::random_graph(60, 0.1, 4);
  const HierarchyTree t = build_hierarchy(g, 2, 2, 1);
  const auto dir = std::filesystem::temp_directory_path() / "mslp_hierarchy_test";
  std::filesystem::remove_all(dir);
  save_hierarchy(t, g, dir.string());
  EXPECT_EQ(load_hierarchy(g, dir.string()), t);
  std::filesystem::remove_all(dir);
}

TEST(HierarchyTree, KarateFixture) {
  const Graph g = load_edge_list(std::string(MSLP_DATA_DIR) + "/karate/karate.edges");
  const HierarchyTree t = load_hierarchy(g, std::string(MSLP_DATA_DIR) + "/karate");
  expect_nested(t);
  ASSERT_EQ(t.depth(), 2u);
  const auto frac = within_cluster_fractions(g, t);
  EXPECT_NEAR(frac[1] * 78.0, 68.0, 1e-9);
  EXPECT_NEAR(frac[2] * 78.0, 50.0, 1e-9);
}

}  // namespace
}  // namespace mslp
