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

#ifndef MSLP_METHODS_H_
#define MSLP_METHODS_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mslp/baselines.h"
#include "mslp/graph.h"
#include "mslp/hierarchy.h"
#include "mslp/msapprox.h"
#include "mslp/predict.h"
#include "mslp/proximity.h"

namespace mslp {

enum class MethodKind {
  kMultiScale,    // mslp
  kEigen,         // eig: one global rank-r eigendecomposition
  kClra,          // clra: leaf level only
  kRandCluster,   // randcluster: clra on random leaf clusters
  kCommonNeighbors,
  kAdamicAdar,
  kPreferentialAttachment,
  kRandomWalkRestart,
  kKatz,
  kRandom,
};

MethodKind parse_method(const std::string& name);
std::string method_name(MethodKind kind);
std::vector<std::string> method_names();

struct MethodConfig {
  MethodKind kind = MethodKind::kMultiScale;
  std::size_t depth = 3;
  std::size_t branching = 2;
  std::size_t rank = 20;
  ProximityConfig proximity;
  // Empty means default_weights(depth).
  std::vector<double> weights;
  std::uint64_t seed = 1;
  ApproxOptions approx;
  PartitionOptions partition;
  double restart = 0.15;
  // Fraction of nodes moved to another leaf before the low-rank model is
  // built (robustness experiments).
  double shuffle_fraction = 0.0;
};

// Fits `config` on g. When `tree` is given, hierarchy-based methods use it
// instead of clustering g themselves (randcluster always draws its own).
// The returned scorer may refer to g, which must outlive it.
std::unique_ptr<LinkScorer> fit_method(const MethodConfig& config, const Graph& g,
                                       const HierarchyTree* tree = nullptr);

// Hierarchy the method would use on g (nullopt for non-hierarchical ones).
std::optional<HierarchyTree> method_hierarchy(const MethodConfig& config, const Graph& g,
                                              const HierarchyTree* tree = nullptr);

}  // namespace mslp

#endif  // MSLP_METHODS_H_
