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

#include "mslp/msapprox.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include "mslp/error.h"
#include "parallel.h"

namespace mslp {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t cluster_of_row(std::span<const std::size_t> offsets, std::size_t row) {
  const auto it = std::upper_bound(offsets.begin(), offsets.end(), row);
  return static_cast<std::size_t>(it - offsets.begin()) - 1;
}

std::vector<NodeId> slice(const NodeOrdering& ord, std::size_t begin, std::size_t end) {
  return {ord.order.begin() + static_cast<std::ptrdiff_t>(begin),
          ord.order.begin() + static_cast<std::ptrdiff_t>(end)};
}

void finalize_core_offsets(LevelApproximation& la) {
  la.core_offsets.assign(la.bases.size() + 1, 0);
  for (std::size_t k = 0; k < la.bases.size(); ++k) {
    la.core_offsets[k + 1] = la.core_offsets[k] + la.bases[k].cols();
  }
}

void check_rank(std::size_t rank) {
  if (rank == 0) throw InvalidArgument("rank must be at least 1");
}

}  // namespace

NodeOrdering NodeOrdering::from_order(std::vector<NodeId> order) {
  NodeOrdering out;
  out.row_of.assign(order.size(), order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= order.size() || out.row_of[order[i]] != order.size()) {
      throw InvalidArgument("node ordering is not a permutation");
    }
    out.row_of[order[i]] = i;
  }
  out.order = std::move(order);
  return out;
}

std::size_t LevelApproximation::basis_entries() const {
  std::size_t total = 0;
  for (const auto& b : bases) total += b.rows() * b.cols();
  return total;
}

std::pair<std::size_t, std::size_t> LevelApproximation::locate(NodeId u) const {
  if (u >= ordering->row_of.size()) throw InvalidArgument("node id out of range");
  const std::size_t row = ordering->row_of[u];
  const std::size_t k = cluster_of_row(row_offsets, row);
  return {k, row - row_offsets[k]};
}

MultiScaleModel::MultiScaleModel(HierarchyTree tree, std::size_t rank, std::vector<LevelApproximation> levels,
                                 BuildStats stats)
    : tree_(std::move(tree)), rank_(rank), levels_(std::move(levels)), stats_(std::move(stats)) {
  if (levels_.size() != tree_.depth() + 1) throw InvalidArgument("model needs one approximation per level");
  for (std::size_t p = 0; p < levels_.size(); ++p) {
    const auto& la = levels_[p];
    if (la.level != p || la.num_clusters() != tree_.num_clusters(p) || la.num_nodes() != tree_.num_nodes() ||
        la.ordering != levels_.front().ordering) {
      throw InvalidArgument("level " + std::to_string(p) + " does not match the hierarchy");
    }
  }
}

std::size_t MultiScaleModel::basis_entries() const {
  std::size_t total = 0;
  for (const auto& la : levels_) total += la.basis_entries();
  return total;
}

DenseMatrix project_core(const Graph& g, const LevelApproximation& la) {
  const NodeOrdering& ord = *la.ordering;
  const std::size_t k = la.num_clusters();
  DenseMatrix s = DenseMatrix::Zero(static_cast<Eigen::Index>(la.core_size()),
                                    static_cast<Eigen::Index>(la.core_size()));
  detail::parallel_for(k, [&](std::size_t a) {
    const std::size_t ra = la.bases[a].cols();
    if (ra == 0) return;
    const std::size_t begin = la.row_offsets[a];
    const std::size_t rows = la.row_offsets[a + 1] - begin;
    // Z_b = A[a rows, b rows] U_b, one accumulator per touched cluster b.
    std::unordered_map<std::size_t, DenseMatrix> z;
    for (std::size_t i = 0; i < rows; ++i) {
      const NodeId u = ord.order[begin + i];
      const auto nbrs = g.neighbors(u);
      const auto wts = g.weights(u);
      for (std::size_t e = 0; e < nbrs.size(); ++e) {
        const std::size_t row = ord.row_of[nbrs[e]];
        const std::size_t b = cluster_of_row(la.row_offsets, row);
        const auto& ub = la.bases[b].matrix();
        if (ub.cols() == 0) continue;
        auto [it, fresh] = z.try_emplace(b);
        if (fresh) it->second = DenseMatrix::Zero(static_cast<Eigen::Index>(rows), ub.cols());
        it->second.row(static_cast<Eigen::Index>(i)) +=
            wts[e] * ub.row(static_cast<Eigen::Index>(row - la.row_offsets[b]));
      }
    }
    const auto& ua = la.bases[a].matrix();
    for (const auto& [b, zb] : z) {
      s.block(static_cast<Eigen::Index>(la.core_offsets[a]), static_cast<Eigen::Index>(la.core_offsets[b]),
              static_cast<Eigen::Index>(ra), zb.cols())
          .noalias() = ua.transpose() * zb;
    }
  });
  return 0.5 * (s + s.transpose());
}

LevelApproximation clra_level(const Graph& g, const HierarchyTree& tree, std::size_t level, std::size_t rank,
                              const ApproxOptions& options) {
  check_rank(rank);
  if (tree.num_nodes() != g.num_nodes()) throw InvalidArgument("hierarchy and graph sizes differ");
  if (level > tree.depth()) throw InvalidArgument("level exceeds hierarchy depth");
  LevelApproximation la;
  la.level = level;
  la.ordering = std::make_shared<const NodeOrdering>(NodeOrdering::from_order(tree.leaf_order()));
  la.row_offsets = tree.cluster_offsets(level);
  const std::size_t k = la.row_offsets.size() - 1;
  la.bases.resize(k);
  detail::parallel_for(k, [&](std::size_t i) {
    const auto nodes = slice(*la.ordering, la.row_offsets[i], la.row_offsets[i + 1]);
    const Graph block = g.induced_subgraph(nodes);
    try {
      la.bases[i] = symmetric_eig_top_r(GraphOperator(block), std::min(rank, nodes.size()), options.eig).vectors;
    } catch (const NumericalError& e) {
      throw NumericalError("cluster " + std::to_string(i) + " at level " + std::to_string(level) + ": " +
                               e.what(),
                           e.residuals());
    }
  });
  finalize_core_offsets(la);
  la.core = project_core(g, la);
  return la;
}

LevelApproximation clra_leaf(const Graph& g, const HierarchyTree& tree, std::size_t rank,
                             const ApproxOptions& options) {
  return clra_level(g, tree, tree.depth(), rank, options);
}

OrthonormalBasis lift_subspace(const Graph& parent, std::span<const OrthonormalBasis> children, std::size_t rank,
                               const ApproxOptions& options) {
  check_rank(rank);
  const std::size_t m = parent.num_nodes();
  std::vector<std::size_t> row_start(children.size() + 1, 0);
  std::vector<std::size_t> col_start(children.size() + 1, 0);
  for (std::size_t i = 0; i < children.size(); ++i) {
    row_start[i + 1] = row_start[i] + children[i].rows();
    col_start[i + 1] = col_start[i] + children[i].cols();
  }
  if (row_start.back() != m) throw InvalidArgument("child row counts do not add up to the parent size");

  // Y = A Omega with Omega = diag(children), one sparse row at a time.
  DenseMatrix y = DenseMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(col_start.back()));
  for (NodeId u = 0; u < m; ++u) {
    const auto nbrs = parent.neighbors(u);
    const auto wts = parent.weights(u);
    for (std::size_t e = 0; e < nbrs.size(); ++e) {
      const std::size_t v = nbrs[e];
      const std::size_t c = cluster_of_row(row_start, v);
      const auto& uc = children[c].matrix();
      if (uc.cols() == 0) continue;
      y.row(u).segment(static_cast<Eigen::Index>(col_start[c]), uc.cols()) +=
          wts[e] * uc.row(static_cast<Eigen::Index>(v - row_start[c]));
    }
  }
  if (options.power_pass) {
    const OrthonormalBasis q0 = orthonormalize(y);
    if (!q0.is_empty()) y = multiply(parent, multiply(parent, q0.matrix()));
  }

  const OrthonormalBasis q = orthonormalize(y);
  if (q.is_empty()) throw NumericalError("parent block has an empty sketch range (all-zero block)");
  const DenseMatrix aq = multiply(parent, q.matrix());
  DenseMatrix b = q.matrix().transpose() * aq;
  b = 0.5 * (b + b.transpose()).eval();
  const auto eig = symmetric_eig_top_r(DenseOperator(b), std::min(rank, q.cols()), options.eig);
  return OrthonormalBasis::adopt(q.matrix() * eig.vectors.matrix());
}

BuildStats build_multiscale_streaming(const Graph& g, const HierarchyTree& tree, std::size_t rank,
                                      const std::function<void(LevelApproximation&&)>& sink,
                                      const ApproxOptions& options) {
  BuildStats stats;
  stats.level_seconds.assign(tree.depth() + 1, 0.0);
  auto t0 = std::chrono::steady_clock::now();
  LevelApproximation child = clra_level(g, tree, tree.depth(), rank, options);
  stats.level_seconds[tree.depth()] = seconds_since(t0);
  stats.peak_basis_entries = child.basis_entries();
  const std::size_t c = tree.branching();

  for (std::size_t p = tree.depth(); p-- > 0;) {
    t0 = std::chrono::steady_clock::now();
    LevelApproximation la;
    la.level = p;
    la.ordering = child.ordering;
    la.row_offsets = tree.cluster_offsets(p);
    const std::size_t k = la.row_offsets.size() - 1;
    la.bases.resize(k);
    detail::parallel_for(k, [&](std::size_t j) {
      const auto nodes = slice(*la.ordering, la.row_offsets[j], la.row_offsets[j + 1]);
      const Graph block = g.induced_subgraph(nodes);
      std::span<const OrthonormalBasis> kids(child.bases.data() + j * c, c);
      try {
        la.bases[j] = lift_subspace(block, kids, rank, options);
      } catch (const NumericalError& e) {
        throw NumericalError("cluster " + std::to_string(j) + " at level " + std::to_string(p) + ": " + e.what(),
                             e.residuals());
      }
    });
    finalize_core_offsets(la);
    stats.peak_basis_entries = std::max(stats.peak_basis_entries, child.basis_entries() + la.basis_entries());
    sink(std::move(child));
    la.core = project_core(g, la);
    stats.level_seconds[p] = seconds_since(t0);
    child = std::move(la);
  }
  sink(std::move(child));
  return stats;
}

MultiScaleModel build_multiscale(const Graph& g, const HierarchyTree& tree, std::size_t rank,
                                 const ApproxOptions& options) {
  std::vector<LevelApproximation> levels;
  BuildStats stats = build_multiscale_streaming(
      g, tree, rank, [&](LevelApproximation&& la) { levels.push_back(std::move(la)); }, options);
  std::reverse(levels.begin(), levels.end());
  return MultiScaleModel(tree, rank, std::move(levels), std::move(stats));
}

double approximation_error(const Graph& g, const LevelApproximation& la) {
  const std::size_t n = la.num_nodes();
  if (n != g.num_nodes()) throw InvalidArgument("approximation and graph sizes differ");
  const double norm2 = g.squared_frobenius_norm();
  double err2 = 0.0;
  if (n <= 2048) {
    const NodeOrdering& ord = *la.ordering;
    const std::size_t k = la.num_clusters();
    std::vector<double> partial(n, 0.0);
    detail::parallel_for(n, [&](std::size_t row) {
      const std::size_t a = cluster_of_row(la.row_offsets, row);
      const auto& ua = la.bases[a].matrix();
      DenseVector approx = DenseVector::Zero(static_cast<Eigen::Index>(n));
      if (ua.cols() > 0) {
        const DenseVector t = la.core.middleRows(static_cast<Eigen::Index>(la.core_offsets[a]), ua.cols())
                                  .transpose() *
                              ua.row(static_cast<Eigen::Index>(row - la.row_offsets[a])).transpose();
        for (std::size_t b = 0; b < k; ++b) {
          const auto& ub = la.bases[b].matrix();
          if (ub.cols() == 0) continue;
          approx.segment(static_cast<Eigen::Index>(la.row_offsets[b]), ub.rows()) =
              ub * t.segment(static_cast<Eigen::Index>(la.core_offsets[b]), ub.cols());
        }
      }
      const NodeId u = ord.order[row];
      const auto nbrs = g.neighbors(u);
      const auto wts = g.weights(u);
      for (std::size_t e = 0; e < nbrs.size(); ++e) approx[static_cast<Eigen::Index>(ord.row_of[nbrs[e]])] -= wts[e];
      partial[row] = approx.squaredNorm();
    });
    err2 = std::accumulate(partial.begin(), partial.end(), 0.0);
  } else {
    // With block-orthonormal U: ||A - U S U^T||^2 = ||A||^2 - 2 <U^T A U, S> + ||S||^2.
    const DenseMatrix projected = project_core(g, la);
    err2 = std::max(0.0, norm2 - 2.0 * projected.cwiseProduct(la.core).sum() + la.core.squaredNorm());
  }
  return norm2 > 0.0 ? std::sqrt(err2 / norm2) : std::sqrt(err2);
}

}  // namespace mslp
