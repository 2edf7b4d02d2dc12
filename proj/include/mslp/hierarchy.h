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

#ifndef MSLP_HIERARCHY_H_
#define MSLP_HIERARCHY_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mslp/graph.h"

namespace mslp {

using ClusterId = std::uint32_t;

// Balanced c-way divisive hierarchy of depth l. Level p assigns every node a
// cluster id in [0, c^p); cluster k at level p+1 is a child of cluster k / c
// at level p, and no cluster is empty.
class HierarchyTree {
 public:
  HierarchyTree() = default;

  // Validates nesting and non-emptiness. levels[0] must be all zeros.
  static HierarchyTree from_levels(std::vector<std::vector<ClusterId>> levels, std::size_t branching);
  // Upper levels follow from the leaves: ancestor at level p is leaf / c^(l-p).
  static HierarchyTree from_leaves(std::span<const ClusterId> leaves, std::size_t depth,
                                   std::size_t branching);
  // Depth-0 tree: the whole graph is one cluster.
  static HierarchyTree single_cluster(std::size_t num_nodes, std::size_t branching = 2);

  std::size_t depth() const { return levels_.size() - 1; }
  std::size_t branching() const { return branching_; }
  std::size_t num_nodes() const { return levels_.front().size(); }
  std::size_t num_clusters(std::size_t level) const;

  std::span<const ClusterId> level(std::size_t p) const { return levels_.at(p); }
  std::span<const ClusterId> leaves() const { return levels_.back(); }

  // Nodes sorted by leaf cluster, ascending id within a leaf. Every cluster
  // at every level is a contiguous run of this order.
  std::vector<NodeId> leaf_order() const;
  // Offsets into leaf_order(): cluster k of level p spans
  // [offsets[k], offsets[k+1]).
  std::vector<std::size_t> cluster_offsets(std::size_t p) const;

  friend bool operator==(const HierarchyTree&, const HierarchyTree&) = default;

 private:
  std::vector<std::vector<ClusterId>> levels_{{}};
  std::size_t branching_ = 2;
};

struct PartitionOptions {
  // Allowed deviation of a bisection side from its target share of nodes.
  double balance_tolerance = 0.1;
  // Every child cluster keeps at least this share of its parent's nodes.
  double min_child_fraction = 0.1;
  int refinement_passes = 8;
};

// Divisive clustering: every cluster is split c ways by multilevel recursive
// bisection of its own induced subgraph. The seed only permutes the matching
// visit order during coarsening.
HierarchyTree build_hierarchy(const Graph& g, std::size_t depth, std::size_t branching,
                              std::uint64_t seed, const PartitionOptions& options = {});

// Uniformly random nested assignment with equal-size siblings (sizes differ
// by at most one).
HierarchyTree random_hierarchy(const Graph& g, std::size_t depth, std::size_t branching,
                               std::uint64_t seed);

// Moves ceil(fraction * n) distinct nodes to a uniformly chosen different
// leaf; their ancestors follow. A node is never moved out of a leaf it is the
// last member of, so in degenerate tiny cases fewer nodes may move.
HierarchyTree shuffle_leaves(const HierarchyTree& tree, double fraction, std::uint64_t seed);

// Share of edges whose endpoints share a cluster; 1 for an edgeless graph.
double within_cluster_fraction(const Graph& g, std::span<const ClusterId> assignment);
// One entry per level 0..l.
std::vector<double> within_cluster_fractions(const Graph& g, const HierarchyTree& tree);

// "label<TAB>cluster" lines, one file per level: level_1.tsv .. level_l.tsv.
void write_assignment(std::ostream& out, const Graph& g, std::span<const ClusterId> assignment);
void save_hierarchy(const HierarchyTree& tree, const Graph& g, const std::string& directory);
// Reads consecutive level_p.tsv files. Cluster ids may be arbitrary; they are
// renumbered so children of cluster k are k*c .. k*c+c-1 in order of their
// original ids. Every parent must have exactly c children.
HierarchyTree load_hierarchy(const Graph& g, const std::string& directory);

}  // namespace mslp

#endif  // MSLP_HIERARCHY_H_
