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

#include "mslp/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "binary_io.h"
#include "mslp/error.h"

namespace mslp {
namespace {

constexpr char kGraphMagic[9] = "MSLPGRPH";
constexpr std::uint32_t kGraphVersion = 1;

std::uint64_t pair_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

bool parse_int64(std::string_view s, long long& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

Graph Graph::from_edges(std::size_t num_nodes, std::span<const WeightedEdge> edges,
                        std::vector<std::string> labels) {
  if (num_nodes > std::numeric_limits<NodeId>::max()) {
    throw InvalidArgument("graph too large for 32-bit node ids");
  }
  if (labels.empty()) {
    labels.reserve(num_nodes);
    for (std::size_t i = 0; i < num_nodes; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != num_nodes) throw InvalidArgument("label count does not match node count");

  std::vector<WeightedEdge> arcs;
  arcs.reserve(2 * edges.size());
  for (const auto& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes) throw InvalidArgument("edge endpoint out of range");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw InvalidArgument("edge weights must be finite and nonnegative");
    }
    if (e.u == e.v) continue;
    arcs.push_back(e);
    arcs.push_back({e.v, e.u, e.weight});
  }
  std::sort(arcs.begin(), arcs.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  std::vector<std::uint64_t> offsets(num_nodes + 1, 0);
  std::vector<NodeId> columns;
  std::vector<double> values;
  columns.reserve(arcs.size());
  values.reserve(arcs.size());
  for (std::size_t i = 0; i < arcs.size();) {
    std::size_t j = i;
    double w = 0.0;
    while (j < arcs.size() && arcs[j].u == arcs[i].u && arcs[j].v == arcs[i].v) w += arcs[j++].weight;
    columns.push_back(arcs[i].v);
    values.push_back(w);
    ++offsets[arcs[i].u + 1];
    i = j;
  }
  for (std::size_t u = 0; u < num_nodes; ++u) offsets[u + 1] += offsets[u];
  return from_csr(std::move(offsets), std::move(columns), std::move(values), std::move(labels));
}

Graph Graph::from_csr(std::vector<std::uint64_t> offsets, std::vector<NodeId> columns,
                      std::vector<double> values, std::vector<std::string> labels) {
  const std::size_t n = labels.size();
  if (offsets.size() != n + 1 || offsets.front() != 0 || offsets.back() != columns.size() ||
      values.size() != columns.size()) {
    throw InvalidArgument("inconsistent CSR arrays");
  }
  Graph g;
  g.offsets_ = std::move(offsets);
  g.columns_ = std::move(columns);
  g.values_ = std::move(values);
  g.labels_ = std::move(labels);
  for (std::size_t u = 0; u < n; ++u) {
    if (g.offsets_[u] > g.offsets_[u + 1]) throw InvalidArgument("CSR offsets must be monotone");
    auto nb = g.neighbors(static_cast<NodeId>(u));
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] >= n || nb[k] == u) throw InvalidArgument("invalid neighbor or self-loop in CSR");
      if (k > 0 && nb[k] <= nb[k - 1]) throw InvalidArgument("neighbor lists must be strictly increasing");
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    auto nb = g.neighbors(static_cast<NodeId>(u));
    auto w = g.weights(static_cast<NodeId>(u));
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (g.edge_weight(nb[k], static_cast<NodeId>(u)) != w[k] || !g.has_edge(nb[k], static_cast<NodeId>(u))) {
        throw InvalidArgument("CSR adjacency is not symmetric");
      }
    }
  }
  g.index_labels();
  return g;
}

void Graph::index_labels() {
  label_index_.clear();
  label_index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!label_index_.emplace(labels_[i], static_cast<NodeId>(i)).second) {
      throw InvalidArgument("duplicate node label '" + labels_[i] + "'");
    }
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (!is_valid(u) || !is_valid(v)) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

double Graph::edge_weight(NodeId u, NodeId v) const {
  if (!is_valid(u) || !is_valid(v)) return 0.0;
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return 0.0;
  return weights(u)[static_cast<std::size_t>(it - nb.begin())];
}

std::optional<NodeId> Graph::find(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

double Graph::squared_frobenius_norm() const {
  double s = 0.0;
  for (double w : values_) s += w * w;
  return s;
}

Graph Graph::induced_subgraph(std::span<const NodeId> nodes) const {
  std::vector<NodeId> local(num_nodes(), std::numeric_limits<NodeId>::max());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!is_valid(nodes[i])) throw InvalidArgument("induced_subgraph: invalid node");
    local[nodes[i]] = static_cast<NodeId>(i);
  }
  std::vector<std::uint64_t> offsets(nodes.size() + 1, 0);
  std::vector<NodeId> columns;
  std::vector<double> values;
  std::vector<std::pair<NodeId, double>> row;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    row.clear();
    auto nb = neighbors(nodes[i]);
    auto w = weights(nodes[i]);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (local[nb[k]] != std::numeric_limits<NodeId>::max()) row.emplace_back(local[nb[k]], w[k]);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, x] : row) {
      columns.push_back(c);
      values.push_back(x);
    }
    offsets[i + 1] = columns.size();
  }
  std::vector<std::string> labels;
  labels.reserve(nodes.size());
  for (NodeId u : nodes) labels.push_back(labels_[u]);
  Graph g;
  g.offsets_ = std::move(offsets);
  g.columns_ = std::move(columns);
  g.values_ = std::move(values);
  g.labels_ = std::move(labels);
  g.index_labels();
  return g;
}

Graph Graph::without_edges(std::span<const NodePair> removed) const {
  std::vector<std::uint64_t> keys;
  keys.reserve(2 * removed.size());
  for (const auto& [u, v] : removed) {
    keys.push_back(pair_key(u, v));
    keys.push_back(pair_key(v, u));
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::uint64_t> offsets(num_nodes() + 1, 0);
  std::vector<NodeId> columns;
  std::vector<double> values;
  columns.reserve(columns_.size());
  values.reserve(values_.size());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    auto nb = neighbors(u);
    auto w = weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (std::binary_search(keys.begin(), keys.end(), pair_key(u, nb[k]))) continue;
      columns.push_back(nb[k]);
      values.push_back(w[k]);
    }
    offsets[u + 1] = columns.size();
  }
  Graph g;
  g.offsets_ = std::move(offsets);
  g.columns_ = std::move(columns);
  g.values_ = std::move(values);
  g.labels_ = labels_;
  g.label_index_ = label_index_;
  return g;
}

std::vector<WeightedEdge> Graph::edge_list() const {
  std::vector<WeightedEdge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    auto nb = neighbors(u);
    auto w = weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] > u) out.push_back({u, nb[k], w[k]});
    }
  }
  return out;
}

Graph read_edge_list(std::istream& in, const EdgeListOptions& options, const std::string& source) {
  struct RawArc {
    std::string u, v;
    double w;
  };
  std::vector<RawArc> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(std::move(t));
    if (tok.size() < 2 || tok.size() > 3) {
      throw ParseError(source, line_no, "expected 'u v [w]', got '" + line + "'");
    }
    double w = 1.0;
    if (tok.size() == 3 && options.weighted) {
      if (!parse_double(tok[2], w) || !std::isfinite(w) || w < 0.0) {
        throw ParseError(source, line_no, "invalid weight '" + tok[2] + "'");
      }
    }
    raw.push_back({std::move(tok[0]), std::move(tok[1]), w});
  }
  if (raw.empty()) throw ParseError(source, line_no, "edge list is empty");

  std::vector<std::string> labels;
  for (const auto& a : raw) {
    labels.push_back(a.u);
    labels.push_back(a.v);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::vector<long long> numeric(labels.size());
  bool all_numeric = true;
  for (std::size_t i = 0; i < labels.size() && all_numeric; ++i) {
    all_numeric = parse_int64(labels[i], numeric[i]);
  }
  if (all_numeric) {
    std::vector<std::size_t> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return numeric[a] != numeric[b] ? numeric[a] < numeric[b] : labels[a] < labels[b];
    });
    std::vector<std::string> sorted;
    sorted.reserve(labels.size());
    for (std::size_t i : order) sorted.push_back(labels[i]);
    labels = std::move(sorted);
  }
  std::unordered_map<std::string, NodeId> index;
  index.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], static_cast<NodeId>(i));

  std::vector<WeightedEdge> edges;
  if (options.symmetrize) {
    // Sum repeated arcs, then merge the two orientations by max so that a
    // pair listed once per direction is one edge of the listed weight.
    std::map<std::pair<NodeId, NodeId>, double> arc_weight;
    for (const auto& a : raw) arc_weight[{index.at(a.u), index.at(a.v)}] += a.w;
    std::map<std::pair<NodeId, NodeId>, double> undirected;
    for (const auto& [key, w] : arc_weight) {
      auto [u, v] = key;
      if (u == v) continue;
      auto& slot = undirected[{std::min(u, v), std::max(u, v)}];
      slot = std::max(slot, w);
    }
    edges.reserve(undirected.size());
    for (const auto& [key, w] : undirected) edges.push_back({key.first, key.second, w});
  } else {
    edges.reserve(raw.size());
    for (const auto& a : raw) edges.push_back({index.at(a.u), index.at(a.v), a.w});
  }
  const std::size_t n = labels.size();
  return Graph::from_edges(n, edges, std::move(labels));
}

Graph load_edge_list(const std::string& path, const EdgeListOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_edge_list(in, options, path);
}

void write_edge_list(std::ostream& out, const Graph& g, bool with_weights) {
  for (const auto& e : g.edge_list()) {
    out << g.label(e.u) << ' ' << g.label(e.v);
    if (with_weights) {
      char buf[32];
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), e.weight);
      (void)ec;
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(end - buf));
    }
    out << '\n';
  }
}

void save_graph_binary(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(kGraphMagic, 8);
  binary::write<std::uint32_t>(out, kGraphVersion);
  binary::write<std::uint32_t>(out, 0);
  binary::write<std::uint64_t>(out, g.num_nodes());
  binary::write<std::uint64_t>(out, g.nnz());
  binary::write_array(out, g.row_offsets().data(), g.row_offsets().size());
  binary::write_array(out, g.column_indices().data(), g.column_indices().size());
  binary::write_array(out, g.values().data(), g.values().size());
  for (const auto& label : g.labels()) binary::write_string(out, label);
  if (!out) throw Error("failed writing '" + path + "'");
}

Graph load_graph_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  binary::expect_magic(in, kGraphMagic, "graph cache");
  const auto version = binary::read<std::uint32_t>(in);
  if (version != kGraphVersion) throw Error("unsupported graph cache version " + std::to_string(version));
  binary::read<std::uint32_t>(in);
  const auto n = binary::read<std::uint64_t>(in);
  const auto nnz = binary::read<std::uint64_t>(in);
  std::vector<std::uint64_t> offsets(n + 1);
  std::vector<NodeId> columns(nnz);
  std::vector<double> values(nnz);
  binary::read_array(in, offsets.data(), offsets.size());
  binary::read_array(in, columns.data(), columns.size());
  binary::read_array(in, values.data(), values.size());
  std::vector<std::string> labels(n);
  for (auto& label : labels) label = binary::read_string(in);
  return Graph::from_csr(std::move(offsets), std::move(columns), std::move(values), std::move(labels));
}

Graph load_graph(const std::string& path, const EdgeListOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  char magic[8] = {};
  in.read(magic, 8);
  if (in && std::equal(magic, magic + 8, kGraphMagic)) return load_graph_binary(path);
  return load_edge_list(path, options);
}

void spmv_into(const Graph& g, std::span<const double> x, std::span<double> y) {
  if (x.size() != g.num_nodes() || y.size() != g.num_nodes()) {
    throw InvalidArgument("spmv: vector length does not match node count");
  }
  const auto offsets = g.row_offsets();
  const auto cols = g.column_indices();
  const auto vals = g.values();
  const auto n = static_cast<std::int64_t>(g.num_nodes());
#pragma omp parallel for schedule(static) if (n > 50000)
  for (std::int64_t u = 0; u < n; ++u) {
    double acc = 0.0;
    for (auto k = offsets[u]; k < offsets[u + 1]; ++k) acc += vals[k] * x[cols[k]];
    y[u] = acc;
  }
}

std::vector<double> spmv(const Graph& g, std::span<const double> x) {
  std::vector<double> y(g.num_nodes());
  spmv_into(g, x, y);
  return y;
}

std::size_t degree(const Graph& g, NodeId u) {
  if (!g.is_valid(u)) throw InvalidArgument("degree: invalid node " + std::to_string(u));
  return g.neighbors(u).size();
}

std::vector<NodeId> two_hop_candidates(const Graph& g, NodeId u) {
  if (!g.is_valid(u)) throw InvalidArgument("two_hop_candidates: invalid node " + std::to_string(u));
  std::vector<NodeId> out;
  for (NodeId z : g.neighbors(u)) {
    for (NodeId v : g.neighbors(z)) {
      if (v != u) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  auto nb = g.neighbors(u);
  std::vector<NodeId> result;
  result.reserve(out.size());
  std::set_difference(out.begin(), out.end(), nb.begin(), nb.end(), std::back_inserter(result));
  return result;
}

std::vector<NodeId> non_neighbors(const Graph& g, NodeId u) {
  if (!g.is_valid(u)) throw InvalidArgument("non_neighbors: invalid node " + std::to_string(u));
  auto nb = g.neighbors(u);
  std::vector<NodeId> out;
  out.reserve(g.num_nodes() - nb.size());
  std::size_t k = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    while (k < nb.size() && nb[k] < v) ++k;
    if (v == u || (k < nb.size() && nb[k] == v)) continue;
    out.push_back(v);
  }
  return out;
}

SnapshotPair make_snapshot_pair(Graph train, std::span<const NodePair> test_edges) {
  SnapshotPair sp;
  sp.train = std::move(train);
  for (auto [u, v] : test_edges) {
    if (!sp.train.is_valid(u) || !sp.train.is_valid(v)) {
      ++sp.discarded_unknown;
      continue;
    }
    if (u == v || sp.train.has_edge(u, v)) {
      ++sp.discarded_existing;
      continue;
    }
    sp.test_edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(sp.test_edges.begin(), sp.test_edges.end());
  sp.test_edges.erase(std::unique(sp.test_edges.begin(), sp.test_edges.end()), sp.test_edges.end());
  return sp;
}

SnapshotPair load_snapshot_pair(const std::string& train_path, const std::string& test_path,
                                const EdgeListOptions& options) {
  Graph train = load_graph(train_path, options);
  std::ifstream in(test_path);
  if (!in) throw Error("cannot open '" + test_path + "'");
  std::vector<NodePair> pairs;
  std::size_t unknown = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(std::move(t));
    if (tok.size() < 2 || tok.size() > 3) {
      throw ParseError(test_path, line_no, "expected 'u v [w]', got '" + line + "'");
    }
    auto u = train.find(tok[0]);
    auto v = train.find(tok[1]);
    if (!u || !v) {
      ++unknown;
      continue;
    }
    pairs.emplace_back(*u, *v);
  }
  SnapshotPair sp = make_snapshot_pair(std::move(train), pairs);
  sp.discarded_unknown += unknown;
  return sp;
}

}  // namespace mslp
