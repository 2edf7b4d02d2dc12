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
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "mslp/error.h"
#include "mslp/graph.h"
#include "oracles.h"

namespace mslp {
namespace {

using testing::make_graph;

Graph parse(const std::string& text, EdgeListOptions opt = {}) {
  std::istringstream in(text);
  return read_edge_list(in, opt, "test");
}

void expect_invariants(const Graph& g) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const auto nb = g.neighbors(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      EXPECT_NE(nb[i], u);
      if (i > 0) EXPECT_LT(nb[i - 1], nb[i]);
      EXPECT_EQ(g.edge_weight(nb[i], u), g.weights(u)[i]);
    }
  }
}

TEST(LoadEdgeList, SimplePath) {
  const Graph g = parse("1 2\n2 3\n");
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.label(0), "1");
  expect_invariants(g);
}

TEST(LoadEdgeList, SymmetrizedPairIsOneEdge) {
  const Graph g = parse("1 2\n2 1\n");
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_DOUBLE_EQ(g.edge_weight(0, 1), 1.0);
}

TEST(LoadEdgeList, UndirectedRepeatsAreSummed) {
  EdgeListOptions opt;
  opt.symmetrize = false;
  const Graph g = parse("1 2\n2 1\n1 2\n", opt);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_DOUBLE_EQ(g.edge_weight(0, 1), 3.0);
}

TEST(LoadEdgeList, DuplicatesSummedAndSelfLoopsDropped) {
  EdgeListOptions opt;
  opt.weighted = true;
  const Graph g = parse("# comment\na b 2\na b 0.5\nb b 7\nb c\n", opt);
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_DOUBLE_EQ(g.edge_weight(*g.find("a"), *g.find("b")), 2.5);
  EXPECT_DOUBLE_EQ(g.edge_weight(*g.find("b"), *g.find("c")), 1.0);
  EXPECT_FALSE(g.has_edge(*g.find("b"), *g.find("b")));
}

TEST(LoadEdgeList, NumericLabelsSortNumerically) {
  const Graph g = parse("10 9\n9 100\n");
  EXPECT_EQ(g.labels(), (std::vector<std::string>{"9", "10", "100"}));
}

TEST(LoadEdgeList, MalformedLineReportsLineNumber) {
  try {
    parse("1 2\n# ok\n3\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse("1 2 3 4\n"), ParseError);
  EdgeListOptions opt;
  opt.weighted = true;
  EXPECT_THROW(parse("1 2 x\n", opt), ParseError);
}

TEST(LoadEdgeList, EmptyInputIsAnError) {
  EXPECT_THROW(parse(""), Error);
  EXPECT_THROW(parse("# only comments\n\n"), Error);
}

TEST(LoadEdgeList, Karate) {
  const Graph g = load_edge_list(std::string(MSLP_DATA_DIR) + "/karate/karate.edges");
  EXPECT_EQ(g.num_nodes(), 34u);
  EXPECT_EQ(g.num_edges(), 78u);
  expect_invariants(g);
}

TEST(Spmv, Examples) {
  EXPECT_EQ(spmv(make_graph(2, {{0, 1}}), std::vector<double>{1, 0}), (std::vector<double>{0, 1}));
  EXPECT_EQ(spmv(testing::complete_graph(3), std::vector<double>{1, 1, 1}), (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(spmv(testing::path_graph(3), std::vector<double>{1, 2, 3}), (std::vector<double>{2, 4, 2}));
}

TEST(Spmv, DimensionMismatch) {
  EXPECT_THROW(spmv(testing::path_graph(3), std::vector<double>{1, 2}), InvalidArgument);
}

TEST(Spmv, UnitVectorsReproduceDenseColumns) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    // The dense matrix comes straight from the generated pair list.
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t n = 40 + 30 * seed;
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    std::vector<WeightedEdge> edges;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (unif(gen) < 0.1) {
          const double w = 0.5 + unif(gen);
          edges.push_back({i, j, w});
          dense[i][j] = dense[j][i] = w;
        }
      }
    }
    const Graph g = Graph::from_edges(n, edges);
    expect_invariants(g);
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = 1.0;
      const auto col = spmv(g, e);
      for (std::size_t r = 0; r < n; ++r) ASSERT_EQ(col[r], dense[r][i]);
      e[i] = 0.0;
    }
  }
}

TEST(TwoHop, Examples) {
  EXPECT_EQ(two_hop_candidates(testing::path_graph(4), 0), (std::vector<NodeId>{2}));
  EXPECT_TRUE(two_hop_candidates(testing::complete_graph(3), 0).empty());
  const Graph star = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(two_hop_candidates(star, 1), (std::vector<NodeId>{2, 3}));
  EXPECT_THROW(two_hop_candidates(star, 9), InvalidArgument);
}

TEST(TwoHop, MatchesBfsDistanceTwo) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const Graph g = testing::random_graph(60, 0.05, seed);
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      std::vector<int> dist(g.num_nodes(), -1);
      std::queue<NodeId> q;
      dist[u] = 0;
      q.push(u);
      while (!q.empty()) {
        const NodeId x = q.front();
        q.pop();
        for (NodeId y : g.neighbors(x)) {
          if (dist[y] < 0) {
            dist[y] = dist[x] + 1;
            q.push(y);
          }
        }
      }
      std::vector<NodeId> expected;
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (dist[v] == 2) expected.push_back(v);
      }
      const auto got = two_hop_candidates(g, u);
      ASSERT_EQ(got, expected);
      for (NodeId v : got) {
        EXPECT_NE(v, u);
        EXPECT_FALSE(g.has_edge(u, v));
      }
    }
  }
}

TEST(Degree, Examples) {
  EXPECT_EQ(degree(testing::complete_graph(3), 1), 2u);
  const Graph star = make_graph(5, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(degree(star, 0), 3u);
  EXPECT_EQ(degree(star, 4), 0u);
  EXPECT_THROW(degree(star, 5), InvalidArgument);
}

TEST(Graph, TextRoundTrip) {
  EdgeListOptions opt;
  opt.weighted = true;
  const Graph g = parse("a b 1.5\nb c 2\nc d 0.25\nd a 3\n", opt);
  std::ostringstream out;
  write_edge_list(out, g);
  EXPECT_EQ(parse(out.str(), opt), g);
}

TEST(Graph, BinaryRoundTrip) {
  const Graph g = testing::random_graph(80, 0.1, 3);
  const auto path = std::filesystem::temp_directory_path() / "mslp_graph_test.bin";
  save_graph_binary(g, path.string());
  EXPECT_EQ(load_graph_binary(path.string()), g);
  EXPECT_EQ(load_graph(path.string()), g);
  {
    std::ofstream trunc(path, std::ios::binary | std::ios::trunc);
    trunc.write("MSLPGRPH", 8);
  }
  EXPECT_THROW(load_graph_binary(path.string()), Error);
  std::filesystem::remove(path);
}

TEST(Graph, FromCsrRejectsAsymmetry) {
  EXPECT_THROW(Graph::from_csr({0, 1, 1}, {1}, {1.0}, {"0", "1"}), InvalidArgument);
  EXPECT_THROW(Graph::from_csr({0, 1, 2}, {0, 0}, {1.0, 1.0}, {"0", "1"}), InvalidArgument);
}

TEST(Graph, WithoutEdgesAndInducedSubgraph) {
  const Graph k4 = testing::complete_graph(4);
  const NodePair drop[] = {{1, 0}, {2, 3}};
  const Graph g = k4.without_edges(drop);
  EXPECT_EQ(g.num_nodes(), 4u);
  EXPECT_EQ(g.num_edges(), 4u);
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_FALSE(g.has_edge(3, 2));
  expect_invariants(g);

  const NodeId nodes[] = {3, 0, 1};
  const Graph sub = k4.induced_subgraph(nodes);
  EXPECT_EQ(sub.num_nodes(), 3u);
  EXPECT_EQ(sub.num_edges(), 3u);
  EXPECT_EQ(sub.label(0), "3");
}

TEST(SnapshotPair, DiscardsUnknownAndExistingEdges) {
  const auto dir = std::filesystem::temp_directory_path();
  {
    std::ofstream(dir / "mslp_t1.edges") << "1 2\n2 3\n3 4\n";
    std::ofstream(dir / "mslp_t2.edges") << "1 3\n3 1\n1 2\n4 9\n2 2\n1 4\n";
  }
  const SnapshotPair sp = load_snapshot_pair((dir / "mslp_t1.edges").string(), (dir / "mslp_t2.edges").string());
  EXPECT_EQ(sp.discarded_unknown, 1u);
  EXPECT_EQ(sp.discarded_existing, 2u);
  EXPECT_EQ(sp.test_edges, (std::vector<NodePair>{{0, 2}, {0, 3}}));
  for (auto [u, v] : sp.test_edges) EXPECT_FALSE(sp.train.has_edge(u, v));
}

}  // namespace
}  // namespace mslp
