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

#include "mslp/methods.h"

#include <array>
#include <string>
#include <utility>

#include "mslp/error.h"
#include "mslp/random.h"

namespace mslp {
namespace {

constexpr std::array<std::pair<MethodKind, const char*>, 10> kNames{{
    {MethodKind::kMultiScale, "mslp"},
    {MethodKind::kEigen, "eig"},
    {MethodKind::kClra, "clra"},
    {MethodKind::kRandCluster, "randcluster"},
    {MethodKind::kCommonNeighbors, "cn"},
    {MethodKind::kAdamicAdar, "aa"},
    {MethodKind::kPreferentialAttachment, "pa"},
    {MethodKind::kRandomWalkRestart, "rwr"},
    {MethodKind::kKatz, "katz"},
    {MethodKind::kRandom, "random"},
}};

class BaselineMethod final : public LinkScorer {
 public:
  BaselineMethod(const Graph& g, BaselineConfig cfg) : scorer_(g, std::move(cfg)) {}
  std::vector<double> scores(NodeId u, std::span<const NodeId> candidates) const override {
    return scorer_.scores(u, candidates);
  }

 private:
  BaselineScorer scorer_;
};

// Symmetric pseudo-random score per unordered pair.
class RandomMethod final : public LinkScorer {
 public:
  explicit RandomMethod(std::uint64_t seed) : seed_(seed) {}
  std::vector<double> scores(NodeId u, std::span<const NodeId> candidates) const override {
    std::vector<double> out(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const std::uint64_t a = std::min(u, candidates[i]);
      const std::uint64_t b = std::max(u, candidates[i]);
      out[i] = static_cast<double>(derive_seed(seed_, (a << 32) | b) >> 11) * 0x1.0p-53;
    }
    return out;
  }

 private:
  std::uint64_t seed_;
};

BaselineKind baseline_kind(MethodKind kind) {
  switch (kind) {
    case MethodKind::kCommonNeighbors: return BaselineKind::kCommonNeighbors;
    case MethodKind::kAdamicAdar: return BaselineKind::kAdamicAdar;
    case MethodKind::kPreferentialAttachment: return BaselineKind::kPreferentialAttachment;
    case MethodKind::kRandomWalkRestart: return BaselineKind::kRandomWalkRestart;
    default: return BaselineKind::kKatz;
  }
}

}  // namespace

MethodKind parse_method(const std::string& name) {
  for (const auto& [kind, n] : kNames) {
    if (name == n) return kind;
  }
  std::string all;
  for (const auto& [kind, n] : kNames) all += (all.empty() ? "" : ", ") + std::string(n);
  throw InvalidArgument("unknown method '" + name + "' (expected one of " + all + ")");
}

std::string method_name(MethodKind kind) {
  for (const auto& [k, n] : kNames) {
    if (k == kind) return n;
  }
  return "unknown";
}

std::vector<std::string> method_names() {
  std::vector<std::string> out;
  for (const auto& [k, n] : kNames) out.emplace_back(n);
  return out;
}

std::optional<HierarchyTree> method_hierarchy(const MethodConfig& config, const Graph& g,
                                              const HierarchyTree* tree) {
  HierarchyTree t;
  switch (config.kind) {
    case MethodKind::kMultiScale:
    case MethodKind::kClra:
      t = tree ? *tree : build_hierarchy(g, config.depth, config.branching, config.seed, config.partition);
      break;
    case MethodKind::kRandCluster:
      t = random_hierarchy(g, tree ? tree->depth() : config.depth, tree ? tree->branching() : config.branching,
                           config.seed);
      break;
    case MethodKind::kEigen:
      return HierarchyTree::single_cluster(g.num_nodes());
    default:
      return std::nullopt;
  }
  if (config.shuffle_fraction > 0.0) t = shuffle_leaves(t, config.shuffle_fraction, derive_seed(config.seed, 7));
  return t;
}

std::unique_ptr<LinkScorer> fit_method(const MethodConfig& config, const Graph& g, const HierarchyTree* tree) {
  if (config.kind == MethodKind::kRandom) return std::make_unique<RandomMethod>(config.seed);
  ProximityConfig prox = config.proximity;
  if (prox.measure == Measure::kKatz && prox.beta == 0.0) prox.beta = default_beta(g);

  const auto hierarchy = method_hierarchy(config, g, tree);
  if (!hierarchy) {
    BaselineConfig b;
    b.kind = baseline_kind(config.kind);
    b.restart = config.restart;
    b.katz = prox;
    return std::make_unique<BaselineMethod>(g, std::move(b));
  }
  if (config.rank == 0) throw InvalidArgument("rank must be at least 1");

  if (config.kind == MethodKind::kClra || config.kind == MethodKind::kRandCluster) {
    std::vector<LevelApproximation> leaf;
    leaf.push_back(clra_leaf(g, *hierarchy, config.rank, config.approx));
    return std::make_unique<MultiScalePredictor>(std::move(leaf), prox, std::vector<double>{1.0});
  }
  if (config.kind == MethodKind::kEigen) {
    std::vector<LevelApproximation> top;
    top.push_back(clra_level(g, *hierarchy, 0, config.rank, config.approx));
    return std::make_unique<MultiScalePredictor>(std::move(top), prox, std::vector<double>{1.0});
  }
  MultiScaleModel model = build_multiscale(g, *hierarchy, config.rank, config.approx);
  auto weights = config.weights.empty() ? default_weights(model.depth()) : config.weights;
  return std::make_unique<MultiScalePredictor>(MultiScalePredictor::from_model(model, prox, std::move(weights)));
}

}  // namespace mslp
