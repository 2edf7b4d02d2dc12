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

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"
#include "mslp/error.h"
#include "mslp/eval.h"

namespace mslp {
namespace {

using nlohmann::json;

json to_json(const EvalReport& r) {
  json roc = json::array();
  for (const auto& p : r.roc) roc.push_back({p.fpr, p.tpr});
  json prec = json::object();
  json hits = json::object();
  for (std::size_t i = 0; i < r.k_values.size(); ++i) {
    prec[std::to_string(r.k_values[i])] = r.precision_at_k[i];
    hits[std::to_string(r.k_values[i])] = r.hits_at_k[i];
  }
  return {
      {"method", r.method},
      {"candidate_policy", r.policy},
      {"auc", r.auc},
      {"auc_stddev", r.auc_stddev},
      {"auc_per_iteration", r.auc_per_iteration},
      {"precision_at_k", prec},
      {"hits_at_k", hits},
      {"sample", {{"seed", r.seed}, {"users", r.users}, {"iterations", r.iterations},
                  {"eligible_users", r.eligible_users}}},
      {"positives", r.positives},
      {"negatives", r.negatives},
      {"coverage", r.coverage},
      {"roc", roc},
  };
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

void write_report_json(std::ostream& out, std::span<const EvalReport> reports) {
  json all = json::array();
  for (const auto& r : reports) all.push_back(to_json(r));
  out << all.dump(2) << '\n';
}

void write_roc_csv(std::ostream& out, const EvalReport& report) {
  out << "fpr,tpr\n";
  for (const auto& p : report.roc) out << fmt(p.fpr) << ',' << fmt(p.tpr) << '\n';
}

void write_summary_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "method,policy,auc,auc_stddev";
  if (!reports.empty()) {
    for (std::size_t k : reports.front().k_values) out << ",prec@" << k;
    for (std::size_t k : reports.front().k_values) out << ",hits@" << k;
  }
  out << '\n';
  for (const auto& r : reports) {
    out << r.method << ',' << r.policy << ',' << fmt(r.auc) << ',' << fmt(r.auc_stddev);
    for (double p : r.precision_at_k) out << ',' << fmt(p);
    for (double h : r.hits_at_k) out << ',' << fmt(h);
    out << '\n';
  }
}

void write_timings_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "method,fit_seconds,score_seconds\n";
  for (const auto& r : reports) out << r.method << ',' << fmt(r.fit_seconds) << ',' << fmt(r.score_seconds) << '\n';
}

void write_leave_one_out_csv(std::ostream& out, std::span<const std::string> methods,
                             std::span<const LeaveOneOutResult> results) {
  if (methods.size() != results.size()) throw InvalidArgument("one method name per result expected");
  out << "method";
  if (!results.empty()) {
    for (std::size_t k : results.front().k_values) out << ",hits@" << k;
  }
  out << ",trials\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    out << methods[i];
    for (std::size_t h : results[i].hits) out << ',' << h;
    out << ',' << results[i].edges.size() << '\n';
  }
}

}  // namespace mslp
