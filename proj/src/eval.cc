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

#include "mslp/eval.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "mslp/error.h"
#include "mslp/random.h"
#include "parallel.h"

namespace mslp {

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("roc_curve: score and label counts differ");
  std::size_t pos = 0;
  for (auto l : labels) pos += l ? 1 : 0;
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw InvalidArgument("roc_curve needs at least one positive and one negative");

  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<RocPoint> out{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < idx.size();) {
    const double s = scores[idx[i]];
    for (; i < idx.size() && scores[idx[i]] == s; ++i) {
      if (labels[idx[i]]) {
        ++tp;
      } else {
        ++fp;
      }
    }
    out.push_back({static_cast<double>(fp) / static_cast<double>(neg), static_cast<double>(tp) / static_cast<double>(pos)});
  }
  return out;
}

double auc(std::span<const RocPoint> points) {
  if (points.size() < 2) throw InvalidArgument("auc needs at least two ROC points");
  if (points.front() != RocPoint{0.0, 0.0} || points.back() != RocPoint{1.0, 1.0}) {
    throw InvalidArgument("ROC curve must start at (0,0) and end at (1,1)");
  }
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& a = points[i - 1];
    const auto& b = points[i];
    if (b.fpr < a.fpr || b.tpr < a.tpr) throw InvalidArgument("ROC curve is not monotone");
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

std::vector<RocPoint> thin_roc(std::span<const RocPoint> points, std::size_t max_points) {
  if (points.size() <= max_points || max_points < 2) return {points.begin(), points.end()};
  std::vector<RocPoint> out;
  out.reserve(max_points);
  const std::size_t last = points.size() - 1;
  for (std::size_t j = 0; j < max_points; ++j) out.push_back(points[j * last / (max_points - 1)]);
  return out;
}

LeaveOneOutResult leave_one_out(const Graph& g, const ScorerFactory& factory, std::span<const std::size_t> k_values) {
  LeaveOneOutResult result;
  result.k_values.assign(k_values.begin(), k_values.end());
  for (const auto& e : g.edge_list()) result.edges.emplace_back(e.u, e.v);
  if (result.edges.empty()) throw InvalidArgument("leave-one-out needs at least one edge");
  const std::size_t n = g.num_nodes();
  result.candidate_pairs = n * (n - 1) / 2 - (result.edges.size() - 1);
  result.ranks.assign(result.edges.size(), 0);

  detail::parallel_for(result.edges.size(), [&](std::size_t t) {
    const NodePair held = result.edges[t];
    const Graph masked = g.without_edges(std::span<const NodePair>(&held, 1));
    const auto scorer = factory(masked);
    const NodeId target = held.second;
    const double s_held = scorer->scores(held.first, std::span<const NodeId>(&target, 1))[0];
    std::size_t above = 0;
    for (NodeId x = 0; x < n; ++x) {
      std::vector<NodeId> cands;
      for (NodeId y : non_neighbors(masked, x)) {
        if (y > x && !(x == held.first && y == held.second)) cands.push_back(y);
      }
      if (cands.empty()) continue;
      for (double s : scorer->scores(x, cands)) above += s >= s_held ? 1 : 0;
    }
    result.ranks[t] = above + 1;
  });

  result.hits.assign(k_values.size(), 0);
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    for (std::size_t r : result.ranks) result.hits[i] += r <= k_values[i] ? 1 : 0;
  }
  return result;
}

namespace {

struct UserOutcome {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  std::vector<std::size_t> hits;
  std::size_t test_edges = 0;
};

}  // namespace

EvalReport temporal_eval(const SnapshotPair& sp, const LinkScorer& scorer, const SampleOptions& options,
                         const std::string& method) {
  if (sp.test_edges.empty()) throw InvalidArgument("temporal evaluation needs a non-empty test set");
  if (options.iterations == 0 || options.users == 0) throw InvalidArgument("need at least one user and iteration");
  for (std::size_t k : options.k_values) {
    if (k == 0) throw InvalidArgument("precision cutoffs must be at least 1");
  }
  const Graph& g = sp.train;
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<NodeId>> future(n);
  for (const auto& [u, v] : sp.test_edges) {
    future[u].push_back(v);
    future[v].push_back(u);
  }
  for (auto& f : future) std::sort(f.begin(), f.end());

  std::vector<NodeId> eligible;
  for (NodeId u = 0; u < n; ++u) {
    if (!future[u].empty() && !candidates_for(g, u, options.policy).empty()) eligible.push_back(u);
  }
  if (eligible.empty()) throw InvalidArgument("no user has both a test edge and a candidate");

  EvalReport report;
  report.method = method;
  report.policy = candidate_policy_name(options.policy);
  report.k_values = options.k_values;
  report.seed = options.seed;
  report.iterations = options.iterations;
  report.eligible_users = eligible.size();
  report.users = std::min(options.users, eligible.size());
  report.hits_at_k.assign(options.k_values.size(), 0.0);
  const std::size_t k_max =
      options.k_values.empty() ? 0 : *std::max_element(options.k_values.begin(), options.k_values.end());

  const auto t0 = std::chrono::steady_clock::now();
  std::size_t covered = 0, total_future = 0;
  for (std::size_t it = 0; it < options.iterations; ++it) {
    Rng rng(derive_seed(options.seed, it));
    std::vector<NodeId> pool = eligible;
    rng.shuffle(pool);
    pool.resize(report.users);
    std::sort(pool.begin(), pool.end());

    std::vector<UserOutcome> outcomes(pool.size());
    detail::parallel_for(pool.size(), [&](std::size_t i) {
      const NodeId u = pool[i];
      const auto cands = candidates_for(g, u, options.policy);
      UserOutcome& o = outcomes[i];
      o.scores = scorer.scores(u, cands);
      o.labels.resize(cands.size());
      for (std::size_t c = 0; c < cands.size(); ++c) {
        o.labels[c] = std::binary_search(future[u].begin(), future[u].end(), cands[c]) ? 1 : 0;
      }
      o.test_edges = future[u].size();
      const Prediction top = rank_candidates(u, cands, o.scores, std::max<std::size_t>(k_max, 1));
      o.hits.assign(options.k_values.size(), 0);
      for (std::size_t r = 0; r < top.candidates.size(); ++r) {
        if (!std::binary_search(future[u].begin(), future[u].end(), top.candidates[r])) continue;
        for (std::size_t j = 0; j < options.k_values.size(); ++j) o.hits[j] += r < options.k_values[j] ? 1 : 0;
      }
    });

    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    for (const auto& o : outcomes) {
      scores.insert(scores.end(), o.scores.begin(), o.scores.end());
      labels.insert(labels.end(), o.labels.begin(), o.labels.end());
      total_future += o.test_edges;
      for (std::size_t j = 0; j < o.hits.size(); ++j) report.hits_at_k[j] += static_cast<double>(o.hits[j]);
    }
    const std::size_t pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    covered += pos;
    report.positives += pos;
    report.negatives += labels.size() - pos;
    const auto roc = roc_curve(scores, labels);
    report.auc_per_iteration.push_back(auc(roc));
    if (it == 0) report.roc = thin_roc(roc, options.max_roc_points);
  }
  report.score_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const double trials = static_cast<double>(options.iterations * report.users);
  for (std::size_t j = 0; j < report.k_values.size(); ++j) {
    report.hits_at_k[j] /= trials;
    report.precision_at_k.push_back(report.hits_at_k[j] / static_cast<double>(report.k_values[j]));
  }
  const double iters = static_cast<double>(options.iterations);
  report.auc = std::accumulate(report.auc_per_iteration.begin(), report.auc_per_iteration.end(), 0.0) / iters;
  double var = 0.0;
  for (double a : report.auc_per_iteration) var += (a - report.auc) * (a - report.auc);
  report.auc_stddev = std::sqrt(var / iters);
  report.coverage = total_future ? static_cast<double>(covered) / static_cast<double>(total_future) : 0.0;
  return report;
}

}  // namespace mslp
