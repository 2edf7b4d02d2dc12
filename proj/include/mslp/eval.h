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

#ifndef MSLP_EVAL_H_
#define MSLP_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mslp/graph.h"
#include "mslp/predict.h"

namespace mslp {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

// Exact ROC over every distinct threshold, from (0,0) to (1,1). Tied scores
// produce a single diagonal step.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels);
// Trapezoidal area; points must run monotonically from (0,0) to (1,1).
double auc(std::span<const RocPoint> points);
// At most max_points points, always keeping both endpoints.
std::vector<RocPoint> thin_roc(std::span<const RocPoint> points, std::size_t max_points);

using ScorerFactory = std::function<std::unique_ptr<LinkScorer>(const Graph&)>;

struct LeaveOneOutResult {
  std::vector<std::size_t> k_values;
  std::vector<std::size_t> hits;  // per k
  std::vector<NodePair> edges;    // trial order
  // Rank of each held-out edge among all non-adjacent pairs; pairs tied
  // with it count as ranked above it.
  std::vector<std::size_t> ranks;
  std::size_t candidate_pairs = 0;
};

LeaveOneOutResult leave_one_out(const Graph& g, const ScorerFactory& factory, std::span<const std::size_t> k_values);

struct SampleOptions {
  std::size_t users = 5000;
  std::size_t iterations = 30;
  std::uint64_t seed = 1;
  CandidatePolicy policy = CandidatePolicy::kTwoHop;
  std::vector<std::size_t> k_values{1, 5, 10, 20};
  std::size_t max_roc_points = 2001;
};

struct EvalReport {
  std::string method;
  std::string policy;
  std::vector<RocPoint> roc;  // first iteration, thinned
  double auc = 0.0;           // mean over iterations
  double auc_stddev = 0.0;
  std::vector<double> auc_per_iteration;
  std::vector<std::size_t> k_values;
  // Mean correct predictions among a user's top k.
  std::vector<double> hits_at_k;
  std::vector<double> precision_at_k;  // hits_at_k / k
  std::uint64_t seed = 0;
  std::size_t users = 0;  // sampled per iteration
  std::size_t iterations = 0;
  std::size_t eligible_users = 0;
  std::size_t positives = 0;  // pooled over iterations
  std::size_t negatives = 0;
  // Share of the sampled users' test edges that fall inside the candidate set.
  double coverage = 0.0;
  double fit_seconds = 0.0;
  double score_seconds = 0.0;
};

EvalReport temporal_eval(const SnapshotPair& sp, const LinkScorer& scorer, const SampleOptions& options,
                         const std::string& method = "");

// Report files. Timings go to their own file so the others stay
// reproducible byte for byte.
void write_report_json(std::ostream& out, std::span<const EvalReport> reports);
void write_roc_csv(std::ostream& out, const EvalReport& report);
void write_summary_csv(std::ostream& out, std::span<const EvalReport> reports);
void write_timings_csv(std::ostream& out, std::span<const EvalReport> reports);
void write_leave_one_out_csv(std::ostream& out, std::span<const std::string> methods,
                             std::span<const LeaveOneOutResult> results);

}  // namespace mslp

#endif  // MSLP_EVAL_H_
