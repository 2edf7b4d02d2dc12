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

// Multilevel graph partitioner used by build_hierarchy.

#ifndef MSLP_SRC_PARTITION_H_
#define MSLP_SRC_PARTITION_H_

#include <cstdint>
#include <vector>

#include "mslp/graph.h"
#include "mslp/hierarchy.h"

namespace mslp::detail {

// Node-weighted graph used across coarsening levels.
struct WeightedGraph {
  std::vector<std::uint64_t> offsets{0};
  std::vector<NodeId> columns;
  std::vector<double> edge_weights;
  std::vector<std::int64_t> node_weights;

  std::size_t size() const { return node_weights.size(); }
  std::int64_t total_weight() const;
  static WeightedGraph from_graph(const Graph& g);
};

// Two-way split with the weight of side 0 inside [lo, hi] whenever the
// finest level allows it. Returns 0/1 per node.
std::vector<std::uint8_t> bisect(const WeightedGraph& g, std::int64_t lo, std::int64_t hi,
                                 std::uint64_t seed, const PartitionOptions& options);

// Splits g into `parts` pieces of at least `min_part_size` nodes each,
// by recursive bisection with proportional targets.
std::vector<ClusterId> partition_kway(const Graph& g, std::size_t parts, std::size_t min_part_size,
                                      std::uint64_t seed, const PartitionOptions& options);

// Number of edges crossing between sides (edge weights summed).
double cut_weight(const WeightedGraph& g, const std::vector<std::uint8_t>& side);

}  // namespace mslp::detail

#endif  // MSLP_SRC_PARTITION_H_
