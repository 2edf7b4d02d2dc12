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

#ifndef MSLP_GENERATORS_H_
#define MSLP_GENERATORS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mslp/graph.h"

namespace mslp {

struct SbmParams {
  std::vector<std::size_t> block_sizes;
  double p_in = 0.03;
  double p_out = 0.001;
  // A within-block non-edge appears at t2 with this probability; a
  // cross-block one with flip_rate * p_out / p_in.
  double flip_rate = 0.05;
  std::uint64_t seed = 1;
};

// Planted-partition snapshot pair. Nodes are numbered block by block.
SnapshotPair sbm_temporal(const SbmParams& params);
// Block of every node for the same parameters.
std::vector<std::size_t> sbm_blocks(const SbmParams& params);

// Chung-Lu graph with expected degrees following a power law of the given
// exponent, rescaled to the requested mean degree.
Graph power_law_graph(std::size_t n, double exponent, double mean_degree, std::uint64_t seed);

}  // namespace mslp

#endif  // MSLP_GENERATORS_H_
