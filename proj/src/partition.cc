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

#include "partition.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>

#include "mslp/linalg.h"
#include "mslp/random.h"

namespace mslp::detail {
namespace {

constexpr std::size_t kCoarsestSize = 100;
// Coarsest graphs beyond this size (matching stalled) use a BFS ordering
// instead of a dense Fiedler solve.
constexpr std::size_t kMaxSpectralSize = 1500;

constexpr NodeId kUnmatched = std::numeric_limits<NodeId>::max();

struct Level {
  WeightedGraph graph;
  // Fine node -> coarse node of the next level.
  std::vector<NodeId> to_coarse;
};

WeightedGraph contract(const WeightedGraph& fine, const std::vector<NodeId>& to_coarse,
                       std::size_t coarse_n) {
  WeightedGraph coarse;
  coarse.node_weights.assign(coarse_n, 0);
  std::vector<std::vector<NodeId>> members(coarse_n);
  for (std::size_t u = 0; u < fine.size(); ++u) {
    coarse.node_weights[to_coarse[u]] += fine.node_weights[u];
    members[to_coarse[u]].push_back(static_cast<NodeId>(u));
  }
  std::vector<double> acc(coarse_n, 0.0);
  std::vector<NodeId> touched;
  coarse.offsets.assign(coarse_n + 1, 0);
  for (std::size_t c = 0; c < coarse_n; ++c) {
    touched.clear();
    for (NodeId u : members[c]) {
      for (auto k = fine.offsets[u]; k < fine.offsets[u + 1]; ++k) {
        const NodeId cv = to_coarse[fine.columns[k]];
        if (cv == c) continue;
        if (acc[cv] == 0.0) touched.push_back(cv);
        acc[cv] += fine.edge_weights[k];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (NodeId cv : touched) {
      coarse.columns.push_back(cv);
      coarse.edge_weights.push_back(acc[cv]);
      acc[cv] = 0.0;
    }
    coarse.offsets[c + 1] = coarse.columns.size();
  }
  return coarse;
}

// Heavy-edge matching, then pairing of leftovers that hang off the same
// neighbor (stars), then pairing of isolated leftovers.
std::vector<NodeId> match(const WeightedGraph& g, Rng& rng, std::int64_t max_node_weight,
                          std::size_t& coarse_n) {
  const std::size_t n = g.size();
  std::vector<NodeId> mate(n, kUnmatched);
  std::vector<NodeId> visit(n);
  std::iota(visit.begin(), visit.end(), NodeId{0});
  rng.shuffle(visit);

  for (NodeId u : visit) {
    if (mate[u] != kUnmatched) continue;
    NodeId best = kUnmatched;
    double best_w = -1.0;
    for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
      const NodeId v = g.columns[k];
      if (mate[v] != kUnmatched || g.node_weights[u] + g.node_weights[v] > max_node_weight) continue;
      if (g.edge_weights[k] > best_w) {  // columns ascend, so ties keep the lowest id
        best_w = g.edge_weights[k];
        best = v;
      }
    }
    if (best != kUnmatched) {
      mate[u] = best;
      mate[best] = u;
    }
  }

  std::vector<NodeId> pending_by_hub(n, kUnmatched);
  NodeId pending_isolated = kUnmatched;
  for (NodeId u : visit) {
    if (mate[u] != kUnmatched) continue;
    if (g.offsets[u] == g.offsets[u + 1]) {
      if (pending_isolated == kUnmatched) {
        pending_isolated = u;
      } else if (g.node_weights[u] + g.node_weights[pending_isolated] <= max_node_weight) {
        mate[u] = pending_isolated;
        mate[pending_isolated] = u;
        pending_isolated = kUnmatched;
      }
      continue;
    }
    NodeId hub = g.columns[g.offsets[u]];
    double hub_w = g.edge_weights[g.offsets[u]];
    for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
      if (g.edge_weights[k] > hub_w) {
        hub_w = g.edge_weights[k];
        hub = g.columns[k];
      }
    }
    const NodeId other = pending_by_hub[hub];
    if (other != kUnmatched && mate[other] == kUnmatched &&
        g.node_weights[u] + g.node_weights[other] <= max_node_weight) {
      mate[u] = other;
      mate[other] = u;
      pending_by_hub[hub] = kUnmatched;
    } else {
      pending_by_hub[hub] = u;
    }
  }

  std::vector<NodeId> to_coarse(n, kUnmatched);
  coarse_n = 0;
  for (NodeId u = 0; u < n; ++u) {
    if (to_coarse[u] != kUnmatched) continue;
    to_coarse[u] = static_cast<NodeId>(coarse_n);
    if (mate[u] != kUnmatched) to_coarse[mate[u]] = static_cast<NodeId>(coarse_n);
    ++coarse_n;
  }
  return to_coarse;
}

std::int64_t side0_weight(const WeightedGraph& g, const std::vector<std::uint8_t>& side) {
  std::int64_t w = 0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (side[u] == 0) w += g.node_weights[u];
  }
  return w;
}

std::int64_t window_distance(std::int64_t w, std::int64_t lo, std::int64_t hi) {
  if (w < lo) return lo - w;
  if (w > hi) return w - hi;
  return 0;
}

// Orders nodes for the initial sweep: by Fiedler value when the graph is
// small enough for a dense solve, else by BFS.
std::vector<NodeId> sweep_order(const WeightedGraph& g) {
  const std::size_t n = g.size();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  if (n <= kMaxSpectralSize) {
    // Laplacian plus a multiple of the all-ones projector: the constant
    // vector moves to the top of the spectrum and the smallest eigenvector
    // is the Fiedler vector (or a component indicator when disconnected).
    DenseMatrix lap = DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    double max_deg = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      double deg = 0.0;
      for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
        lap(static_cast<Eigen::Index>(u), g.columns[k]) -= g.edge_weights[k];
        deg += g.edge_weights[k];
      }
      lap(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u)) += deg;
      max_deg = std::max(max_deg, deg);
    }
    const double shift = (2.0 * max_deg + 1.0) / static_cast<double>(n);
    lap.array() += shift;
    const EigenPairs eig = symmetric_eig_all(lap);
    const auto fiedler = eig.vectors.matrix().col(0);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return fiedler[a] < fiedler[b]; });
    return order;
  }
  std::vector<std::uint8_t> seen(n, 0);
  std::size_t head = 0;
  std::vector<NodeId> bfs;
  bfs.reserve(n);
  for (NodeId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    bfs.push_back(root);
    while (head < bfs.size()) {
      const NodeId u = bfs[head++];
      for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
        if (!seen[g.columns[k]]) {
          seen[g.columns[k]] = 1;
          bfs.push_back(g.columns[k]);
        }
      }
    }
  }
  return bfs;
}

// Best prefix/suffix cut of the sweep order with side 0 inside [lo, hi];
// if no cut fits, the one closest to the window.
std::vector<std::uint8_t> initial_bisection(const WeightedGraph& g, std::int64_t lo, std::int64_t hi) {
  const std::size_t n = g.size();
  const std::vector<NodeId> order = sweep_order(g);
  const std::int64_t total = g.total_weight();
  std::vector<std::uint8_t> in_prefix(n, 0);
  double cut = 0.0;
  std::int64_t prefix_w = 0;
  // (distance to window, cut, prefix length, prefix-is-side-0)
  std::tuple<std::int64_t, double, std::size_t, bool> best{std::numeric_limits<std::int64_t>::max(), 0.0, 0, true};
  auto consider = [&](std::size_t len) {
    for (bool prefix_is_0 : {true, false}) {
      const std::int64_t w0 = prefix_is_0 ? prefix_w : total - prefix_w;
      const auto cand = std::make_tuple(window_distance(w0, lo, hi), cut, len, prefix_is_0);
      if (std::get<0>(cand) < std::get<0>(best) ||
          (std::get<0>(cand) == std::get<0>(best) && std::get<1>(cand) < std::get<1>(best) - 1e-12)) {
        best = cand;
      }
    }
  };
  consider(0);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId u = order[i];
    for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
      cut += in_prefix[g.columns[k]] ? -g.edge_weights[k] : g.edge_weights[k];
    }
    in_prefix[u] = 1;
    prefix_w += g.node_weights[u];
    consider(i + 1);
  }
  std::vector<std::uint8_t> side(n);
  const auto [dist, best_cut, len, prefix_is_0] = best;
  for (std::size_t i = 0; i < n; ++i) {
    const bool in = i < len;
    side[order[i]] = (in == prefix_is_0) ? 0 : 1;
  }
  return side;
}

std::vector<double> gains(const WeightedGraph& g, const std::vector<std::uint8_t>& side) {
  std::vector<double> gain(g.size(), 0.0);
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
      gain[u] += side[g.columns[k]] != side[u] ? g.edge_weights[k] : -g.edge_weights[k];
    }
  }
  return gain;
}

// Fiduccia-Mattheyses passes with rollback to the best prefix of moves.
// Moves must keep side 0 inside [lo, hi] or bring it closer.
void refine(const WeightedGraph& g, std::vector<std::uint8_t>& side, std::int64_t lo, std::int64_t hi,
            int passes) {
  const std::size_t n = g.size();
  const std::size_t patience = std::max<std::size_t>(25, n / 50);
  for (int pass = 0; pass < passes; ++pass) {
    std::vector<double> gain = gains(g, side);
    std::int64_t w0 = side0_weight(g, side);
    std::vector<std::uint8_t> locked(n, 0);
    using Entry = std::pair<double, std::int64_t>;  // (gain, -node)
    std::priority_queue<Entry> heap;
    for (std::size_t u = 0; u < n; ++u) {
      bool boundary = false;
      for (auto k = g.offsets[u]; k < g.offsets[u + 1] && !boundary; ++k) boundary = side[g.columns[k]] != side[u];
      if (boundary) heap.emplace(gain[u], -static_cast<std::int64_t>(u));
    }
    std::vector<NodeId> moves;
    double cumulative = 0.0;
    double best = 0.0;
    std::size_t best_len = 0;
    std::int64_t start_dist = window_distance(w0, lo, hi);
    std::int64_t best_dist = start_dist;
    std::size_t since_best = 0;
    while (!heap.empty()) {
      const auto [gu, neg_u] = heap.top();
      heap.pop();
      const auto u = static_cast<NodeId>(-neg_u);
      if (locked[u] || gu != gain[u]) continue;
      const std::int64_t nw = side[u] == 0 ? w0 - g.node_weights[u] : w0 + g.node_weights[u];
      const std::int64_t d_new = window_distance(nw, lo, hi);
      if (d_new > 0 && d_new >= window_distance(w0, lo, hi)) continue;
      side[u] ^= 1;
      locked[u] = 1;
      w0 = nw;
      cumulative += gu;
      gain[u] = -gain[u];
      moves.push_back(u);
      for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
        const NodeId v = g.columns[k];
        gain[v] += side[v] == side[u] ? -2.0 * g.edge_weights[k] : 2.0 * g.edge_weights[k];
        if (!locked[v]) heap.emplace(gain[v], -static_cast<std::int64_t>(v));
      }
      // Balance repairs count as improvements before cut reductions.
      if (d_new < best_dist || (d_new == best_dist && cumulative > best + 1e-12)) {
        best = cumulative;
        best_dist = d_new;
        best_len = moves.size();
        since_best = 0;
      } else if (++since_best > patience) {
        break;
      }
    }
    for (std::size_t i = moves.size(); i > best_len; --i) side[moves[i - 1]] ^= 1;
    if (best_len == 0) break;
  }
}

// Exact repair on the finest level: move nodes of least cut damage (highest
// gain, then lowest degree, then lowest id) from the heavy side.
void enforce_balance(const WeightedGraph& g, std::vector<std::uint8_t>& side, std::int64_t lo,
                     std::int64_t hi) {
  std::int64_t w0 = side0_weight(g, side);
  if (w0 >= lo && w0 <= hi) return;
  const std::uint8_t from = w0 < lo ? 1 : 0;
  std::vector<double> gain = gains(g, side);
  using Entry = std::tuple<double, std::int64_t, std::int64_t>;  // (gain, -degree, -node)
  std::priority_queue<Entry> heap;
  auto deg = [&](std::size_t u) { return static_cast<std::int64_t>(g.offsets[u + 1] - g.offsets[u]); };
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (side[u] == from) heap.emplace(gain[u], -deg(u), -static_cast<std::int64_t>(u));
  }
  while ((w0 < lo || w0 > hi) && !heap.empty()) {
    const auto [gu, nd, neg_u] = heap.top();
    heap.pop();
    const auto u = static_cast<std::size_t>(-neg_u);
    if (side[u] != from || gu != gain[u]) continue;
    const std::int64_t nw = from == 0 ? w0 - g.node_weights[u] : w0 + g.node_weights[u];
    if (window_distance(nw, lo, hi) >= window_distance(w0, lo, hi)) continue;
    side[u] ^= 1;
    w0 = nw;
    for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
      const NodeId v = g.columns[k];
      gain[v] += side[v] == side[u] ? -2.0 * g.edge_weights[k] : 2.0 * g.edge_weights[k];
      if (side[v] == from) heap.emplace(gain[v], -deg(v), -static_cast<std::int64_t>(v));
    }
  }
}

}  // namespace

std::int64_t WeightedGraph::total_weight() const {
  return std::accumulate(node_weights.begin(), node_weights.end(), std::int64_t{0});
}

WeightedGraph WeightedGraph::from_graph(const Graph& g) {
  WeightedGraph w;
  w.offsets.assign(g.row_offsets().begin(), g.row_offsets().end());
  w.columns.assign(g.column_indices().begin(), g.column_indices().end());
  w.edge_weights.assign(g.values().begin(), g.values().end());
  w.node_weights.assign(g.num_nodes(), 1);
  return w;
}

double cut_weight(const WeightedGraph& g, const std::vector<std::uint8_t>& side) {
  double cut = 0.0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
      if (side[u] != side[g.columns[k]]) cut += g.edge_weights[k];
    }
  }
  return cut / 2.0;
}

std::vector<std::uint8_t> bisect(const WeightedGraph& g, std::int64_t lo, std::int64_t hi,
                                 std::uint64_t seed, const PartitionOptions& options) {
  Rng rng(seed);
  std::vector<Level> levels;
  levels.push_back({g, {}});
  const std::int64_t max_node_weight =
      std::max<std::int64_t>(1, (g.total_weight() + static_cast<std::int64_t>(kCoarsestSize) - 1) /
                                    static_cast<std::int64_t>(kCoarsestSize / 2));
  while (levels.back().graph.size() > kCoarsestSize) {
    std::size_t coarse_n = 0;
    auto to_coarse = match(levels.back().graph, rng, max_node_weight, coarse_n);
    if (coarse_n * 20 > levels.back().graph.size() * 19) break;
    WeightedGraph coarse = contract(levels.back().graph, to_coarse, coarse_n);
    levels.back().to_coarse = std::move(to_coarse);
    levels.push_back({std::move(coarse), {}});
  }

  std::vector<std::uint8_t> side = initial_bisection(levels.back().graph, lo, hi);
  refine(levels.back().graph, side, lo, hi, options.refinement_passes);
  for (std::size_t l = levels.size() - 1; l-- > 0;) {
    std::vector<std::uint8_t> fine(levels[l].graph.size());
    for (std::size_t u = 0; u < fine.size(); ++u) fine[u] = side[levels[l].to_coarse[u]];
    side = std::move(fine);
    refine(levels[l].graph, side, lo, hi, options.refinement_passes);
  }
  enforce_balance(g, side, lo, hi);
  return side;
}

namespace {

void split_recursive(const Graph& g, std::span<const NodeId> nodes, std::size_t parts, ClusterId first_part,
                     std::size_t min_part_size, std::uint64_t seed, const PartitionOptions& options,
                     std::vector<ClusterId>& out) {
  if (parts == 1) {
    for (NodeId u : nodes) out[u] = first_part;
    return;
  }
  const std::size_t k0 = parts / 2;
  const std::size_t k1 = parts - k0;
  const auto m = static_cast<std::int64_t>(nodes.size());
  const double target = static_cast<double>(k0) / static_cast<double>(parts);
  const auto min0 = static_cast<std::int64_t>(k0 * min_part_size);
  const auto min1 = static_cast<std::int64_t>(k1 * min_part_size);
  std::int64_t lo = std::max(min0, static_cast<std::int64_t>(std::floor((target - options.balance_tolerance) * m)));
  std::int64_t hi = std::min(m - min1, static_cast<std::int64_t>(std::ceil((target + options.balance_tolerance) * m)));
  if (lo > hi) {
    lo = hi = std::clamp(static_cast<std::int64_t>(std::llround(target * static_cast<double>(m))), min0,
                         std::max(min0, m - min1));
  }

  Graph sub = g.induced_subgraph(nodes);
  const auto side = bisect(WeightedGraph::from_graph(sub), lo, hi, seed, options);
  std::vector<NodeId> left, right;
  for (std::size_t i = 0; i < nodes.size(); ++i) (side[i] == 0 ? left : right).push_back(nodes[i]);
  split_recursive(g, left, k0, first_part, min_part_size, derive_seed(seed, 1), options, out);
  split_recursive(g, right, k1, first_part + static_cast<ClusterId>(k0), min_part_size, derive_seed(seed, 2),
                  options, out);
}

}  // namespace

std::vector<ClusterId> partition_kway(const Graph& g, std::size_t parts, std::size_t min_part_size,
                                      std::uint64_t seed, const PartitionOptions& options) {
  std::vector<NodeId> all(g.num_nodes());
  std::iota(all.begin(), all.end(), NodeId{0});
  std::vector<ClusterId> out(g.num_nodes(), 0);
  const auto floor_share = static_cast<std::size_t>(
      std::ceil(options.min_child_fraction * static_cast<double>(g.num_nodes())));
  std::size_t min_size = std::max(min_part_size, floor_share);
  if (min_size * parts > g.num_nodes()) min_size = g.num_nodes() / parts;
  split_recursive(g, all, parts, 0, min_size, seed, options, out);
  return out;
}

}  // namespace mslp::detail
