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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mslp/error.h"
#include "mslp/generators.h"
#include "mslp/random.h"

namespace mslp {
namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

std::vector<std::size_t> sbm_blocks(const SbmParams& params) {
  std::vector<std::size_t> block;
  for (std::size_t b = 0; b < params.block_sizes.size(); ++b) block.insert(block.end(), params.block_sizes[b], b);
  return block;
}

SnapshotPair sbm_temporal(const SbmParams& params) {
  check_probability(params.p_in, "p_in");
  check_probability(params.p_out, "p_out");
  check_probability(params.flip_rate, "flip_rate");
  const auto block = sbm_blocks(params);
  const std::size_t n = block.size();
  if (n < 2) throw InvalidArgument("SBM needs at least two nodes");

  Rng rng(params.seed);
  std::vector<WeightedEdge> train;
  std::vector<NodePair> test;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double p = block[u] == block[v] ? params.p_in : params.p_out;
      if (rng.uniform() < p) {
        train.push_back({u, v, 1.0});
        continue;
      }
      const double flip = params.p_in > 0.0 ? params.flip_rate * p / params.p_in : 0.0;
      if (rng.uniform() < flip) test.emplace_back(u, v);
    }
  }
  return make_snapshot_pair(Graph::from_edges(n, train), test);
}

Graph power_law_graph(std::size_t n, double exponent, double mean_degree, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("power-law graph needs at least two nodes");
  if (!(exponent > 2.0)) throw InvalidArgument("power-law exponent must exceed 2");
  if (!(mean_degree > 0.0)) throw InvalidArgument("mean degree must be positive");
  std::vector<double> cumulative(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += std::pow(static_cast<double>(i + 1), -1.0 / (exponent - 1.0));
    cumulative[i] = total;
  }
  Rng rng(seed);
  auto draw = [&] {
    const double x = rng.uniform() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return static_cast<NodeId>(std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), n - 1));
  };
  const auto m = static_cast<std::size_t>(std::llround(mean_degree * static_cast<double>(n) / 2.0));
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(m);
  for (std::size_t e = 0; e < m; ++e) {
    NodeId u = draw(), v = draw();
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    pairs.emplace_back(u, v);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<WeightedEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});
  return Graph::from_edges(n, edges);
}

}  // namespace mslp
