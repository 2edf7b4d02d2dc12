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

#include "mslp/hierarchy.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mslp/error.h"
#include "mslp/random.h"
#include "parallel.h"
#include "partition.h"

namespace mslp {
namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_shape(const Graph& g, std::size_t depth, std::size_t branching) {
  if (depth < 1) throw InvalidArgument("hierarchy depth must be >= 1");
  if (branching < 2) throw InvalidArgument("branching must be >= 2");
  const double leaves = std::pow(static_cast<double>(branching), static_cast<double>(depth));
  if (leaves > static_cast<double>(g.num_nodes())) {
    throw InvalidArgument("c^l = " + std::to_string(static_cast<long long>(leaves)) +
                          " leaf clusters exceed the " + std::to_string(g.num_nodes()) + " nodes");
  }
}

}  // namespace

HierarchyTree HierarchyTree::from_levels(std::vector<std::vector<ClusterId>> levels, std::size_t branching) {
  if (levels.empty()) throw InvalidArgument("hierarchy needs at least level 0");
  if (branching < 2) throw InvalidArgument("branching must be >= 2");
  const std::size_t n = levels.front().size();
  for (std::size_t p = 0; p < levels.size(); ++p) {
    if (levels[p].size() != n) throw InvalidArgument("hierarchy levels cover different node counts");
    const std::size_t clusters = ipow(branching, p);
    std::vector<std::size_t> sizes(clusters, 0);
    for (std::size_t u = 0; u < n; ++u) {
      const ClusterId k = levels[p][u];
      if (k >= clusters) {
        throw InvalidArgument("cluster id " + std::to_string(k) + " out of range at level " + std::to_string(p));
      }
      ++sizes[k];
      if (p > 0 && k / branching != levels[p - 1][u]) {
        throw InvalidArgument("node " + std::to_string(u) + " breaks nesting between levels " +
                              std::to_string(p - 1) + " and " + std::to_string(p));
      }
    }
    for (std::size_t k = 0; k < clusters; ++k) {
      if (sizes[k] == 0) {
        throw InvalidArgument("cluster " + std::to_string(k) + " at level " + std::to_string(p) + " is empty");
      }
    }
  }
  HierarchyTree t;
  t.levels_ = std::move(levels);
  t.branching_ = branching;
  return t;
}

HierarchyTree HierarchyTree::from_leaves(std::span<const ClusterId> leaves, std::size_t depth,
                                         std::size_t branching) {
  std::vector<std::vector<ClusterId>> levels(depth + 1, std::vector<ClusterId>(leaves.size()));
  for (std::size_t p = 0; p <= depth; ++p) {
    const std::size_t div = ipow(branching, depth - p);
    for (std::size_t u = 0; u < leaves.size(); ++u) levels[p][u] = static_cast<ClusterId>(leaves[u] / div);
  }
  return from_levels(std::move(levels), branching);
}

HierarchyTree HierarchyTree::single_cluster(std::size_t num_nodes, std::size_t branching) {
  HierarchyTree t;
  t.levels_ = {std::vector<ClusterId>(num_nodes, 0)};
  t.branching_ = branching;
  return t;
}

std::size_t HierarchyTree::num_clusters(std::size_t level) const { return ipow(branching_, level); }

std::vector<NodeId> HierarchyTree::leaf_order() const {
  std::vector<NodeId> order(num_nodes());
  std::iota(order.begin(), order.end(), NodeId{0});
  const auto leaf = leaves();
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return leaf[a] < leaf[b]; });
  return order;
}

std::vector<std::size_t> HierarchyTree::cluster_offsets(std::size_t p) const {
  const auto lvl = level(p);
  std::vector<std::size_t> offsets(num_clusters(p) + 1, 0);
  for (ClusterId k : lvl) ++offsets[k + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return offsets;
}

HierarchyTree build_hierarchy(const Graph& g, std::size_t depth, std::size_t branching, std::uint64_t seed,
                              const PartitionOptions& options) {
  check_shape(g, depth, branching);
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<ClusterId>> levels(depth + 1, std::vector<ClusterId>(n, 0));
  for (std::size_t p = 0; p < depth; ++p) {
    const std::size_t clusters = ipow(branching, p);
    std::vector<std::vector<NodeId>> members(clusters);
    for (NodeId u = 0; u < n; ++u) members[levels[p][u]].push_back(u);
    // Every child must be able to host c^(remaining levels) leaves.
    const std::size_t min_child = ipow(branching, depth - p - 1);
    detail::parallel_for(clusters, [&](std::size_t k) {
      const auto& nodes = members[k];
      Graph sub = g.induced_subgraph(nodes);
      const auto parts = detail::partition_kway(sub, branching, min_child,
                                                derive_seed(seed, p * 1000003ULL + k), options);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        levels[p + 1][nodes[i]] = static_cast<ClusterId>(k * branching + parts[i]);
      }
    });
  }
  return HierarchyTree::from_levels(std::move(levels), branching);
}

HierarchyTree random_hierarchy(const Graph& g, std::size_t depth, std::size_t branching, std::uint64_t seed) {
  check_shape(g, depth, branching);
  const std::size_t n = g.num_nodes();
  Rng rng(seed);
  std::vector<std::vector<ClusterId>> levels(depth + 1, std::vector<ClusterId>(n, 0));
  for (std::size_t p = 0; p < depth; ++p) {
    const std::size_t clusters = ipow(branching, p);
    std::vector<std::vector<NodeId>> members(clusters);
    for (NodeId u = 0; u < n; ++u) members[levels[p][u]].push_back(u);
    for (std::size_t k = 0; k < clusters; ++k) {
      auto& nodes = members[k];
      rng.shuffle(nodes);
      const std::size_t m = nodes.size();
      std::size_t pos = 0;
      for (std::size_t j = 0; j < branching; ++j) {
        const std::size_t len = m / branching + (j < m % branching ? 1 : 0);
        for (std::size_t i = 0; i < len; ++i) {
          levels[p + 1][nodes[pos++]] = static_cast<ClusterId>(k * branching + j);
        }
      }
    }
  }
  return HierarchyTree::from_levels(std::move(levels), branching);
}

HierarchyTree shuffle_leaves(const HierarchyTree& tree, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InvalidArgument("shuffle fraction must lie in [0, 1]");
  const std::size_t n = tree.num_nodes();
  const std::size_t leaves = tree.num_clusters(tree.depth());
  const auto target = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  if (target == 0 || leaves < 2) return tree;

  std::vector<ClusterId> leaf(tree.leaves().begin(), tree.leaves().end());
  std::vector<std::size_t> size(leaves, 0);
  for (ClusterId k : leaf) ++size[k];
  Rng rng(seed);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  rng.shuffle(order);
  std::size_t moved = 0;
  for (NodeId u : order) {
    if (moved == target) break;
    const ClusterId from = leaf[u];
    if (size[from] <= 1) continue;
    auto to = static_cast<ClusterId>(rng.uniform_index(leaves - 1));
    if (to >= from) ++to;
    --size[from];
    ++size[to];
    leaf[u] = to;
    ++moved;
  }
  return HierarchyTree::from_leaves(leaf, tree.depth(), tree.branching());
}

double within_cluster_fraction(const Graph& g, std::span<const ClusterId> assignment) {
  if (assignment.size() != g.num_nodes()) throw InvalidArgument("assignment does not cover all nodes");
  if (g.num_edges() == 0) return 1.0;
  std::size_t within = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (v > u && assignment[u] == assignment[v]) ++within;
    }
  }
  return static_cast<double>(within) / static_cast<double>(g.num_edges());
}

std::vector<double> within_cluster_fractions(const Graph& g, const HierarchyTree& tree) {
  std::vector<double> out;
  for (std::size_t p = 0; p <= tree.depth(); ++p) out.push_back(within_cluster_fraction(g, tree.level(p)));
  return out;
}

void write_assignment(std::ostream& out, const Graph& g, std::span<const ClusterId> assignment) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) out << g.label(u) << '\t' << assignment[u] << '\n';
}

void save_hierarchy(const HierarchyTree& tree, const Graph& g, const std::string& directory) {
  std::filesystem::create_directories(directory);
  for (std::size_t p = 1; p <= tree.depth(); ++p) {
    const auto path = std::filesystem::path(directory) / ("level_" + std::to_string(p) + ".tsv");
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_assignment(out, g, tree.level(p));
  }
}

HierarchyTree load_hierarchy(const Graph& g, const std::string& directory) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<long long>> raw;
  for (std::size_t p = 1;; ++p) {
    const auto path = std::filesystem::path(directory) / ("level_" + std::to_string(p) + ".tsv");
    std::ifstream in(path);
    if (!in) break;
    std::vector<long long> assign(n, -1);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream fields(line);
      std::string label;
      long long cluster;
      if (!(fields >> label >> cluster) || cluster < 0) {
        throw ParseError(path.string(), line_no, "expected 'label<TAB>cluster'");
      }
      auto u = g.find(label);
      if (!u) throw ParseError(path.string(), line_no, "unknown node label '" + label + "'");
      assign[*u] = cluster;
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (assign[u] < 0) throw Error(path.string() + ": node '" + g.label(static_cast<NodeId>(u)) + "' unassigned");
    }
    raw.push_back(std::move(assign));
  }
  if (raw.empty()) throw Error("no level_1.tsv found in '" + directory + "'");

  std::size_t branching = 0;
  {
    std::vector<long long> ids(raw[0]);
    std::sort(ids.begin(), ids.end());
    branching = static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
  }
  std::vector<std::vector<ClusterId>> levels{std::vector<ClusterId>(n, 0)};
  for (std::size_t p = 0; p < raw.size(); ++p) {
    // parent cluster -> sorted original child ids
    std::map<ClusterId, std::map<long long, ClusterId>> children;
    std::map<long long, ClusterId> parent_of;
    for (std::size_t u = 0; u < n; ++u) {
      auto [it, fresh] = parent_of.emplace(raw[p][u], levels[p][u]);
      if (!fresh && it->second != levels[p][u]) {
        throw InvalidArgument("level " + std::to_string(p + 1) + ": cluster " + std::to_string(raw[p][u]) +
                              " spans several parent clusters");
      }
      children[levels[p][u]][raw[p][u]] = 0;
    }
    for (auto& [parent, kids] : children) {
      if (kids.size() != branching) {
        throw InvalidArgument("level " + std::to_string(p + 1) + ": cluster under parent " + std::to_string(parent) +
                              " has " + std::to_string(kids.size()) + " children, expected " +
                              std::to_string(branching));
      }
      ClusterId j = 0;
      for (auto& [orig, id] : kids) id = static_cast<ClusterId>(parent * branching + j++);
    }
    std::vector<ClusterId> next(n);
    for (std::size_t u = 0; u < n; ++u) next[u] = children[levels[p][u]][raw[p][u]];
    levels.push_back(std::move(next));
  }
  return HierarchyTree::from_levels(std::move(levels), branching);
}

}  // namespace mslp
