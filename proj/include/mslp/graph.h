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

#ifndef MSLP_GRAPH_H_
#define MSLP_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mslp {

using NodeId = std::uint32_t;
using NodePair = std::pair<NodeId, NodeId>;

struct WeightedEdge {
  NodeId u;
  NodeId v;
  double weight = 1.0;
};

struct EdgeListOptions {
  // Read an optional third column as the edge weight; otherwise every line
  // contributes weight 1.
  bool weighted = false;
  // Treat each line as a directed arc and take the union of both directions
  // ("1 2" and "2 1" describe one edge). Without it every line is an
  // undirected edge and repeats are summed.
  bool symmetrize = true;
};

// Undirected weighted graph in compressed sparse row form. Both directions of
// every edge are stored, neighbor lists are strictly increasing, there are no
// self-loops, and internal ids 0..n-1 map one-to-one onto external labels.
// Immutable once built.
class Graph {
 public:
  Graph() = default;

  // Duplicate pairs (in either orientation) are summed, self-loops dropped.
  // Labels default to the decimal internal index.
  static Graph from_edges(std::size_t num_nodes, std::span<const WeightedEdge> edges,
                          std::vector<std::string> labels = {});

  // Trusted construction from CSR arrays; validates all invariants.
  static Graph from_csr(std::vector<std::uint64_t> offsets, std::vector<NodeId> columns,
                        std::vector<double> values, std::vector<std::string> labels);

  std::size_t num_nodes() const { return labels_.size(); }
  std::size_t num_edges() const { return columns_.size() / 2; }
  std::size_t nnz() const { return columns_.size(); }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {columns_.data() + offsets_[u], columns_.data() + offsets_[u + 1]};
  }
  std::span<const double> weights(NodeId u) const {
    return {values_.data() + offsets_[u], values_.data() + offsets_[u + 1]};
  }

  bool has_edge(NodeId u, NodeId v) const;
  // 0 when the edge is absent.
  double edge_weight(NodeId u, NodeId v) const;
  bool is_valid(NodeId u) const { return u < num_nodes(); }

  const std::string& label(NodeId u) const { return labels_.at(u); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

  std::span<const std::uint64_t> row_offsets() const { return offsets_; }
  std::span<const NodeId> column_indices() const { return columns_; }
  std::span<const double> values() const { return values_; }

  // Sum of squared stored entries, i.e. ||A||_F^2.
  double squared_frobenius_norm() const;

  // Subgraph induced by `nodes`; local id i corresponds to nodes[i]. Only
  // edges with both endpoints in the set survive.
  Graph induced_subgraph(std::span<const NodeId> nodes) const;

  // Copy of the graph with the listed edges deleted (node set unchanged).
  Graph without_edges(std::span<const NodePair> removed) const;

  std::vector<WeightedEdge> edge_list() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.columns_ == b.columns_ && a.values_ == b.values_ &&
           a.labels_ == b.labels_;
  }

 private:
  void index_labels();

  std::vector<std::uint64_t> offsets_{0};
  std::vector<NodeId> columns_;
  std::vector<double> values_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;
};

// Reads "u v [w]" lines; blank lines and lines starting with '#' are skipped.
// Labels are arbitrary tokens. Internal ids follow numeric label order when
// every label is an integer, lexicographic order otherwise, so the result
// does not depend on line order.
Graph read_edge_list(std::istream& in, const EdgeListOptions& options = {},
                     const std::string& source = "<stream>");
Graph load_edge_list(const std::string& path, const EdgeListOptions& options = {});
void write_edge_list(std::ostream& out, const Graph& g, bool with_weights = true);

// Versioned little-endian binary cache of the CSR arrays and labels.
void save_graph_binary(const Graph& g, const std::string& path);
Graph load_graph_binary(const std::string& path);
// Dispatches on the file's magic bytes.
Graph load_graph(const std::string& path, const EdgeListOptions& options = {});

std::vector<double> spmv(const Graph& g, std::span<const double> x);
void spmv_into(const Graph& g, std::span<const double> x, std::span<double> y);

std::size_t degree(const Graph& g, NodeId u);

// Nodes at hop distance exactly two from u, ascending.
std::vector<NodeId> two_hop_candidates(const Graph& g, NodeId u);
// Every node that is neither u nor adjacent to u, ascending.
std::vector<NodeId> non_neighbors(const Graph& g, NodeId u);

// Training graph at t1 plus the links that appeared by t2 over the same
// node set. Test pairs are stored with u < v, sorted, and never coincide with
// a training edge.
struct SnapshotPair {
  Graph train;
  std::vector<NodePair> test_edges;
  // Test lines whose endpoints were unknown at t1.
  std::size_t discarded_unknown = 0;
  // Test lines that were already training edges (or self-loops).
  std::size_t discarded_existing = 0;
};

SnapshotPair make_snapshot_pair(Graph train, std::span<const NodePair> test_edges);
// The test file may hold either only the new links or the whole t2 graph;
// pairs present at t1 are discarded either way.
SnapshotPair load_snapshot_pair(const std::string& train_path, const std::string& test_path,
                                const EdgeListOptions& options = {});

}  // namespace mslp

#endif  // MSLP_GRAPH_H_
