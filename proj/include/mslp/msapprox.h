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

#ifndef MSLP_MSAPPROX_H_
#define MSLP_MSAPPROX_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mslp/graph.h"
#include "mslp/hierarchy.h"
#include "mslp/linalg.h"

namespace mslp {

// Bijection between node ids and rows of the cluster-sorted matrix.
struct NodeOrdering {
  std::vector<NodeId> order;        // row -> node
  std::vector<std::size_t> row_of;  // node -> row

  static NodeOrdering from_order(std::vector<NodeId> order);
};

// Clustered low-rank approximation of one hierarchy level:
// A ~= U S U^T with U = diag(U_1, ..., U_k) in cluster-sorted row order.
struct LevelApproximation {
  std::size_t level = 0;
  std::shared_ptr<const NodeOrdering> ordering;
  // Cluster k owns rows [row_offsets[k], row_offsets[k+1]) ...
  std::vector<std::size_t> row_offsets;
  // ... and core rows/columns [core_offsets[k], core_offsets[k+1]).
  std::vector<std::size_t> core_offsets;
  std::vector<OrthonormalBasis> bases;
  DenseMatrix core;

  std::size_t num_clusters() const { return bases.size(); }
  std::size_t num_nodes() const { return row_offsets.empty() ? 0 : row_offsets.back(); }
  std::size_t core_size() const { return core_offsets.empty() ? 0 : core_offsets.back(); }
  std::size_t basis_entries() const;

  // Cluster index and local row of node u.
  std::pair<std::size_t, std::size_t> locate(NodeId u) const;
};

struct ApproxOptions {
  // Sketch with A^2 (A Omega) instead of A Omega when lifting.
  bool power_pass = false;
  EigOptions eig;
};

struct BuildStats {
  // Largest number of basis entries alive at once while building.
  std::size_t peak_basis_entries = 0;
  // Wall-clock seconds per level, index = level.
  std::vector<double> level_seconds;
};

class MultiScaleModel {
 public:
  MultiScaleModel() = default;
  MultiScaleModel(HierarchyTree tree, std::size_t rank, std::vector<LevelApproximation> levels,
                  BuildStats stats = {});

  const HierarchyTree& tree() const { return tree_; }
  std::size_t rank() const { return rank_; }
  std::size_t depth() const { return tree_.depth(); }
  std::size_t num_nodes() const { return tree_.num_nodes(); }
  const LevelApproximation& level(std::size_t p) const { return levels_.at(p); }
  std::span<const LevelApproximation> levels() const { return levels_; }
  const NodeOrdering& ordering() const { return *levels_.front().ordering; }
  const BuildStats& stats() const { return stats_; }
  std::size_t basis_entries() const;

 private:
  HierarchyTree tree_;
  std::size_t rank_ = 0;
  std::vector<LevelApproximation> levels_;
  BuildStats stats_;
};

// Direct CLRA at hierarchy level p: every cluster's basis is the top
// min(r, m_i) eigenbasis of its diagonal block A_ii.
LevelApproximation clra_level(const Graph& g, const HierarchyTree& tree, std::size_t level, std::size_t rank,
                              const ApproxOptions& options = {});
// clra_level at the deepest level.
LevelApproximation clra_leaf(const Graph& g, const HierarchyTree& tree, std::size_t rank,
                             const ApproxOptions& options = {});

// Tree-structured subspace approximation of a parent cluster. `parent` is
// the parent's diagonal block with rows in child order; children[i] is the
// basis of the i-th child block. Sketches Y = A Omega with
// Omega = diag(children), orthonormalizes, solves the small projected
// eigenproblem and returns at most `rank` columns.
OrthonormalBasis lift_subspace(const Graph& parent, std::span<const OrthonormalBasis> children,
                               std::size_t rank, const ApproxOptions& options = {});

// U^T A U with the block structure of `la` (its core is ignored).
DenseMatrix project_core(const Graph& g, const LevelApproximation& la);

// Leaf CLRA, then lifting up to level 0; every level keeps its own core.
MultiScaleModel build_multiscale(const Graph& g, const HierarchyTree& tree, std::size_t rank,
                                 const ApproxOptions& options = {});

// Same construction, but each finished level is handed to `sink` and only
// the child level needed for the next lift is kept alive.
BuildStats build_multiscale_streaming(const Graph& g, const HierarchyTree& tree, std::size_t rank,
                                      const std::function<void(LevelApproximation&&)>& sink,
                                      const ApproxOptions& options = {});

// ||A - U S U^T||_F / ||A||_F without forming A densely.
double approximation_error(const Graph& g, const LevelApproximation& la);

// Versioned little-endian model file.
void save_model(const MultiScaleModel& model, const std::string& path, double beta = 0.0);
struct LoadedModel {
  MultiScaleModel model;
  double beta = 0.0;  // 0 when chosen automatically at prediction time
};
LoadedModel load_model(const std::string& path);

}  // namespace mslp

#endif  // MSLP_MSAPPROX_H_
