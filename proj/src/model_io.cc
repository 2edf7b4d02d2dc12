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

#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "binary_io.h"
#include "mslp/error.h"
#include "mslp/msapprox.h"

namespace mslp {
namespace {

constexpr char kMagic[9] = "MSLPMODL";
constexpr std::uint32_t kVersion = 1;

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  binary::write<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
  binary::write<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
  binary::write_array(out, m.data(), static_cast<std::size_t>(m.size()));
}

DenseMatrix read_matrix(std::istream& in) {
  const auto rows = binary::read<std::uint64_t>(in);
  const auto cols = binary::read<std::uint64_t>(in);
  if (rows > (1ULL << 32) || cols > (1ULL << 32)) throw Error("model file: implausible matrix shape");
  DenseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  binary::read_array(in, m.data(), static_cast<std::size_t>(m.size()));
  return m;
}

}  // namespace

void save_model(const MultiScaleModel& model, const std::string& path, double beta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path);
  out.write(kMagic, 8);
  binary::write<std::uint32_t>(out, kVersion);
  binary::write<std::uint32_t>(out, 0);
  binary::write<std::uint64_t>(out, model.num_nodes());
  binary::write<std::uint64_t>(out, model.depth());
  binary::write<std::uint64_t>(out, model.tree().branching());
  binary::write<std::uint64_t>(out, model.rank());
  binary::write<double>(out, beta);

  const auto& order = model.ordering().order;
  binary::write_array(out, order.data(), order.size());
  for (const auto& la : model.levels()) {
    binary::write<std::uint64_t>(out, la.num_clusters());
    for (std::size_t k = 0; k <= la.num_clusters(); ++k) {
      binary::write<std::uint64_t>(out, la.row_offsets[k]);
    }
    for (const auto& b : la.bases) write_matrix(out, b.matrix());
    write_matrix(out, la.core);
  }
  if (!out) throw Error("failed writing model file " + path);
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path);
  binary::expect_magic(in, kMagic, "model");
  if (binary::read<std::uint32_t>(in) != kVersion) throw Error("unsupported model file version");
  binary::read<std::uint32_t>(in);
  const auto n = binary::read<std::uint64_t>(in);
  const auto depth = binary::read<std::uint64_t>(in);
  const auto branching = binary::read<std::uint64_t>(in);
  const auto rank = binary::read<std::uint64_t>(in);
  const double beta = binary::read<double>(in);
  if (n > (1ULL << 32) || depth > 64) throw Error("model file: implausible header");

  std::vector<NodeId> order(n);
  binary::read_array(in, order.data(), order.size());
  auto ordering = std::make_shared<const NodeOrdering>(NodeOrdering::from_order(order));

  std::vector<std::vector<ClusterId>> assignment(depth + 1, std::vector<ClusterId>(n));
  std::vector<LevelApproximation> levels(depth + 1);
  for (std::size_t p = 0; p <= depth; ++p) {
    auto& la = levels[p];
    la.level = p;
    la.ordering = ordering;
    const auto k = binary::read<std::uint64_t>(in);
    if (k == 0 || k > n) throw Error("model file: bad cluster count");
    la.row_offsets.resize(k + 1);
    for (auto& off : la.row_offsets) off = binary::read<std::uint64_t>(in);
    if (la.row_offsets.front() != 0 || la.row_offsets.back() != n) throw Error("model file: bad cluster ranges");
    for (std::size_t c = 0; c < k; ++c) {
      if (la.row_offsets[c] >= la.row_offsets[c + 1]) throw Error("model file: empty cluster");
      for (std::size_t row = la.row_offsets[c]; row < la.row_offsets[c + 1]; ++row) {
        assignment[p][order[row]] = static_cast<ClusterId>(c);
      }
    }
    la.bases.reserve(k);
    la.core_offsets.assign(k + 1, 0);
    for (std::size_t c = 0; c < k; ++c) {
      DenseMatrix u = read_matrix(in);
      if (static_cast<std::size_t>(u.rows()) != la.row_offsets[c + 1] - la.row_offsets[c]) {
        throw Error("model file: basis block has the wrong row count");
      }
      la.bases.push_back(OrthonormalBasis::adopt(std::move(u), 1e-8));
      la.core_offsets[c + 1] = la.core_offsets[c] + la.bases.back().cols();
    }
    la.core = read_matrix(in);
    if (static_cast<std::size_t>(la.core.rows()) != la.core_size() ||
        static_cast<std::size_t>(la.core.cols()) != la.core_size()) {
      throw Error("model file: core has the wrong shape");
    }
  }
  HierarchyTree tree = HierarchyTree::from_levels(std::move(assignment), branching);
  if (tree.leaf_order() != order) throw Error("model file: ordering does not follow the leaf clusters");
  return {MultiScaleModel(std::move(tree), rank, std::move(levels)), beta};
}

}  // namespace mslp
