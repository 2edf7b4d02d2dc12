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

// Command-line driver: cluster, approx, predict, eval, stats, generate.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "json.hpp"
#include "mslp/error.h"
#include "mslp/eval.h"
#include "mslp/generators.h"
#include "mslp/hierarchy.h"
#include "mslp/methods.h"
#include "mslp/msapprox.h"
#include "mslp/predict.h"
#include "mslp/random.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace mslp;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

class ConfigError : public Error {
 public:
  using Error::Error;
};

// key=value lines; "[name]" starts a section that only applies to that
// subcommand.
using ConfigFile = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

ConfigFile read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  ConfigFile cfg;
  std::string section, line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path, line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    for (auto& ch : key) {
      if (ch == '_') ch = '-';
    }
    cfg[section][key] = value;
  }
  return cfg;
}

std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return "";
}

void apply_config(const ConfigFile& cfg, const std::vector<CLI::App*>& subcommands) {
  for (const auto& [section, entries] : cfg) {
    for (const auto& [key, value] : entries) {
      bool used = false;
      for (CLI::App* sc : subcommands) {
        if (!section.empty() && section != sc->get_name()) continue;
        CLI::Option* opt = sc->get_option_no_throw("--" + key);
        if (!opt) continue;
        opt->default_val(value);
        used = true;
      }
      if (!used) {
        throw ConfigError("config key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]") +
                          " does not match any option");
      }
    }
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Effective option values of a subcommand, sorted by name.
std::map<std::string, std::string> effective_options(const CLI::App& sc) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : sc.get_options()) {
    if (opt == sc.get_help_ptr()) continue;
    const std::string name = opt->get_name();
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    out[name.substr(name.find_first_not_of('-'))] = value;
  }
  return out;
}

void write_manifest(const fs::path& dir, const CLI::App& sc, std::uint64_t seed) {
  fs::create_directories(dir);
  const auto options = effective_options(sc);
  std::string canonical = sc.get_name();
  for (const auto& [k, v] : options) canonical += "\n" + k + "=" + v;
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canonical);
  nlohmann::json m = {
      {"command", sc.get_name()},
      {"config", options},
      {"config_hash", hash.str()},
      {"seed", seed},
      {"version", kVersion},
      {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
  };
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

NodeId lookup(const Graph& g, const std::string& label) {
  const auto id = g.find(label);
  if (!id) throw ConfigError("node '" + label + "' is not in the graph");
  return *id;
}

struct GraphArgs {
  std::string path;
  bool weighted = false;

  void add(CLI::App* sc, const std::string& flag = "--graph", bool required = true) {
    auto* o = sc->add_option(flag, path, "Edge list or binary graph cache");
    if (required) o->required();
    sc->add_flag("--weighted", weighted, "Read a third column as edge weight");
  }
  Graph load() const {
    EdgeListOptions opt;
    opt.weighted = weighted;
    return load_graph(path, opt);
  }
};

struct ModelArgs {
  std::size_t levels = 3;
  std::size_t branching = 2;
  std::size_t rank = 20;
  std::uint64_t seed = 1;
  std::string hierarchy;
  bool power_pass = false;

  void add(CLI::App* sc, bool with_rank = true) {
    sc->add_option("--levels", levels, "Hierarchy depth")->check(CLI::Range(0, 30));
    sc->add_option("--branching", branching, "Children per cluster")->check(CLI::Range(2, 1 << 20));
    sc->add_option("--seed", seed, "Root random seed");
    sc->add_option("--hierarchy", hierarchy, "Directory of level_<p>.tsv files to use instead of clustering");
    if (with_rank) {
      sc->add_option("--rank", rank, "Rank per cluster")->check(CLI::PositiveNumber);
      sc->add_flag("--power-pass", power_pass, "Sketch with A^2 when lifting");
    }
  }
  HierarchyTree tree(const Graph& g) const {
    if (!hierarchy.empty()) return load_hierarchy(g, hierarchy);
    return build_hierarchy(g, levels, branching, seed);
  }
};

// Cores are (c^p r)^2 per level; refuse sizes that cannot reasonably fit.
void check_core_memory(const HierarchyTree& t, std::size_t rank) {
  const double side = static_cast<double>(t.num_clusters(t.depth())) * static_cast<double>(rank);
  if (side * side * 8.0 > 8e9) {
    throw ConfigError("leaf core would need (c^l * r)^2 * 8 bytes = " + std::to_string(side * side * 8.0 / 1e9) +
                      " GB; lower --levels or --rank");
  }
}

struct ProximityArgs {
  std::string measure = "katz";
  double beta = 0.0;

  void add(CLI::App* sc) {
    sc->add_option("--measure", measure, "Proximity measure: katz or cn");
    sc->add_option("--beta", beta, "Katz damping (0 = 0.5 / ||A||_2 estimate)")->check(CLI::NonNegativeNumber);
  }
  ProximityConfig config() const {
    ProximityConfig p;
    p.measure = parse_measure(measure);
    p.beta = beta;
    return p;
  }
};


}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("MSLP_THREADS")) {
    const int threads = std::atoi(t);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
  }

  CLI::App app{"Multi-scale link prediction"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value file with option defaults");
  app.set_version_flag("--version", kVersion);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Build the divisive hierarchy and write level_<p>.tsv files");
  GraphArgs cluster_graph;
  ModelArgs cluster_model;
  std::string cluster_out = "hierarchy";
  bool cluster_random = false;
  cluster_graph.add(cluster);
  cluster_model.add(cluster, false);
  cluster->add_option("--out", cluster_out, "Output directory");
  cluster->add_flag("--random", cluster_random, "Uniform random balanced hierarchy instead");

  // approx
  auto* approx = app.add_subcommand("approx", "Build the multi-scale low-rank model");
  GraphArgs approx_graph;
  ModelArgs approx_model;
  double approx_beta = 0.0;
  std::string approx_out = "model.bin";
  approx_graph.add(approx);
  approx_model.add(approx);
  approx->add_option("--beta", approx_beta, "Katz damping stored with the model (0 = automatic)")
      ->check(CLI::NonNegativeNumber);
  approx->add_option("--out", approx_out, "Model file");

  // predict
  auto* predict = app.add_subcommand("predict", "Top-k recommendations for one user");
  GraphArgs predict_graph;
  ModelArgs predict_model;
  ProximityArgs predict_prox;
  std::string predict_model_path, predict_user, predict_method = "mslp", predict_policy = "two_hop",
                                                predict_out;
  std::size_t predict_k = 10;
  std::vector<double> predict_weights;
  predict_graph.add(predict);
  predict_model.add(predict);
  predict_prox.add(predict);
  predict->add_option("--model", predict_model_path, "Model file from `approx` (method mslp)");
  predict->add_option("--user", predict_user, "Node label")->required();
  predict->add_option("--k", predict_k, "Number of recommendations")->check(CLI::PositiveNumber);
  predict->add_option("--weights", predict_weights, "Per-level weights w0,w1,...")->delimiter(',');
  predict->add_option("--method", predict_method, "mslp, eig, clra, randcluster, cn, aa, pa, rwr, katz, random");
  predict->add_option("--policy", predict_policy, "Candidates: two_hop or all_non_neighbors");
  predict->add_option("--out", predict_out, "Output TSV (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "Temporal or leave-one-out evaluation");
  std::string eval_protocol = "temporal", eval_train, eval_test, eval_out = "eval", eval_policy = "two_hop";
  bool eval_weighted = false;
  ModelArgs eval_model;
  ProximityArgs eval_prox;
  std::vector<std::string> eval_methods{"mslp", "clra", "katz", "random"};
  std::vector<std::size_t> eval_k{1, 5, 10, 20};
  std::vector<double> eval_weights;
  std::size_t eval_users = 5000, eval_iterations = 30;
  double eval_shuffle = 0.0;
  eval->add_option("--protocol", eval_protocol, "temporal or loo")->check(CLI::IsMember({"temporal", "loo"}));
  eval->add_option("--train,--graph", eval_train, "Graph at t1 (or the graph for loo)")->required();
  eval->add_option("--test", eval_test, "Edges that appear at t2 (temporal)");
  eval->add_flag("--weighted", eval_weighted, "Read a third column as edge weight");
  eval_model.add(eval);
  eval_prox.add(eval);
  eval->add_option("--methods", eval_methods, "Comma-separated methods")->delimiter(',');
  eval->add_option("--k", eval_k, "Cutoffs for precision@k / hits@k")->delimiter(',');
  eval->add_option("--weights", eval_weights, "Per-level weights w0,w1,...")->delimiter(',');
  eval->add_option("--sample-users", eval_users, "Users sampled per iteration")->check(CLI::PositiveNumber);
  eval->add_option("--iterations", eval_iterations, "Sampling iterations")->check(CLI::PositiveNumber);
  eval->add_option("--policy", eval_policy, "Candidates: two_hop or all_non_neighbors");
  eval->add_option("--shuffle", eval_shuffle, "Fraction of nodes moved to a random leaf")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--out", eval_out, "Output directory");

  // stats
  auto* stats = app.add_subcommand("stats", "Within-cluster edge percentages, built vs random hierarchy");
  GraphArgs stats_graph;
  ModelArgs stats_model;
  std::size_t stats_random_seeds = 10;
  std::string stats_out;
  stats_graph.add(stats);
  stats_model.add(stats, false);
  stats->add_option("--random-seeds", stats_random_seeds, "Random hierarchies averaged")->check(CLI::PositiveNumber);
  stats->add_option("--out", stats_out, "Output directory for stats.csv and the manifest (default stdout only)");

  // generate
  auto* generate = app.add_subcommand("generate", "Write a planted-partition snapshot pair");
  std::size_t gen_blocks = 8, gen_block_size = 625;
  SbmParams gen;
  gen.p_in = 0.02;
  gen.p_out = 0.002;
  std::string gen_out = "sbm";
  generate->add_option("--blocks", gen_blocks, "Number of blocks")->check(CLI::PositiveNumber);
  generate->add_option("--block-size", gen_block_size, "Nodes per block")->check(CLI::PositiveNumber);
  generate->add_option("--p-in", gen.p_in, "Within-block edge probability")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--p-out", gen.p_out, "Cross-block edge probability")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--flip-rate", gen.flip_rate, "Share of within-block non-edges added at t2")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--out", gen_out, "Output directory (train.edges, test.edges)");

  try {
    const std::string cfg_path = find_config_path(argc, argv);
    if (!cfg_path.empty()) apply_config(read_config(cfg_path), {cluster, approx, predict, eval, stats, generate});
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*cluster) {
      const Graph g = cluster_graph.load();
      const HierarchyTree t =
          cluster_random ? random_hierarchy(g, cluster_model.levels, cluster_model.branching, cluster_model.seed)
                         : build_hierarchy(g, cluster_model.levels, cluster_model.branching, cluster_model.seed);
      save_hierarchy(t, g, cluster_out);
      write_manifest(cluster_out, *cluster, cluster_model.seed);
      const auto frac = within_cluster_fractions(g, t);
      for (std::size_t p = 0; p < frac.size(); ++p) {
        std::cout << "level " << p << ": " << t.num_clusters(p) << " clusters, " << std::fixed << std::setprecision(2)
                  << 100.0 * frac[p] << "% within-cluster edges\n";
      }
    } else if (*approx) {
      const Graph g = approx_graph.load();
      const HierarchyTree t = approx_model.tree(g);
      check_core_memory(t, approx_model.rank);
      ApproxOptions opt;
      opt.power_pass = approx_model.power_pass;
      const MultiScaleModel model = build_multiscale(g, t, approx_model.rank, opt);
      const fs::path out(approx_out);
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      save_model(model, approx_out, approx_beta);
      write_manifest(out.has_parent_path() ? out.parent_path() : fs::path("."), *approx, approx_model.seed);
      for (std::size_t p = 0; p <= model.depth(); ++p) {
        std::cout << "level " << p << ": relative error " << std::setprecision(6)
                  << approximation_error(g, model.level(p)) << '\n';
      }
    } else if (*predict) {
      const Graph g = predict_graph.load();
      const NodeId u = lookup(g, predict_user);
      ProximityConfig prox = predict_prox.config();
      std::unique_ptr<LinkScorer> scorer;
      if (!predict_model_path.empty()) {
        if (predict_method != "mslp") throw ConfigError("--model is only used with --method mslp");
        LoadedModel loaded = load_model(predict_model_path);
        if (loaded.model.num_nodes() != g.num_nodes()) throw ConfigError("model and graph sizes differ");
        if (prox.beta == 0.0) prox.beta = loaded.beta;
        if (prox.measure == Measure::kKatz && prox.beta == 0.0) prox.beta = default_beta(g);
        auto w = predict_weights.empty() ? default_weights(loaded.model.depth()) : predict_weights;
        scorer = std::make_unique<MultiScalePredictor>(MultiScalePredictor::from_model(loaded.model, prox, w));
      } else {
        MethodConfig mc;
        mc.kind = parse_method(predict_method);
        mc.depth = predict_model.levels;
        mc.branching = predict_model.branching;
        mc.rank = predict_model.rank;
        mc.seed = predict_model.seed;
        mc.proximity = prox;
        mc.weights = predict_weights;
        mc.approx.power_pass = predict_model.power_pass;
        std::optional<HierarchyTree> fixed;
        if (!predict_model.hierarchy.empty()) fixed = load_hierarchy(g, predict_model.hierarchy);
        scorer = fit_method(mc, g, fixed ? &*fixed : nullptr);
      }
      const Prediction pred = top_k(*scorer, g, u, predict_k, parse_candidate_policy(predict_policy));
      std::ostringstream text;
      text << "rank\tcandidate\tscore\n" << std::setprecision(17);
      for (std::size_t i = 0; i < pred.candidates.size(); ++i) {
        text << i + 1 << '\t' << g.label(pred.candidates[i]) << '\t' << pred.scores[i] << '\n';
      }
      if (predict_out.empty()) {
        std::cout << text.str();
      } else {
        open_out(predict_out) << text.str();
        const fs::path out(predict_out);
        write_manifest(out.has_parent_path() ? out.parent_path() : fs::path("."), *predict, predict_model.seed);
      }
    } else if (*eval) {
      EdgeListOptions gopt;
      gopt.weighted = eval_weighted;
      const fs::path out(eval_out);
      fs::create_directories(out);
      MethodConfig base;
      base.depth = eval_model.levels;
      base.branching = eval_model.branching;
      base.rank = eval_model.rank;
      base.seed = eval_model.seed;
      base.proximity = eval_prox.config();
      base.weights = eval_weights;
      base.approx.power_pass = eval_model.power_pass;
      base.shuffle_fraction = eval_shuffle;
      for (const auto& m : eval_methods) parse_method(m);

      if (eval_protocol == "loo") {
        const Graph g = load_graph(eval_train, gopt);
        std::optional<HierarchyTree> fixed;
        if (!eval_model.hierarchy.empty()) fixed = load_hierarchy(g, eval_model.hierarchy);
        std::vector<LeaveOneOutResult> results;
        for (const auto& m : eval_methods) {
          MethodConfig mc = base;
          mc.kind = parse_method(m);
          results.push_back(leave_one_out(
              g, [&](const Graph& h) { return fit_method(mc, h, fixed ? &*fixed : nullptr); }, eval_k));
        }
        auto csv = open_out(out / "loo.csv");
        write_leave_one_out_csv(csv, eval_methods, results);
        write_leave_one_out_csv(std::cout, eval_methods, results);
      } else {
        if (eval_test.empty()) throw ConfigError("temporal evaluation needs --test");
        const SnapshotPair sp = load_snapshot_pair(eval_train, eval_test, gopt);
        std::optional<HierarchyTree> fixed;
        if (!eval_model.hierarchy.empty()) fixed = load_hierarchy(sp.train, eval_model.hierarchy);
        SampleOptions so;
        so.users = eval_users;
        so.iterations = eval_iterations;
        so.seed = eval_model.seed;
        so.policy = parse_candidate_policy(eval_policy);
        so.k_values = eval_k;
        std::vector<EvalReport> reports;
        for (const auto& m : eval_methods) {
          MethodConfig mc = base;
          mc.kind = parse_method(m);
          const auto t0 = std::chrono::steady_clock::now();
          const auto scorer = fit_method(mc, sp.train, fixed ? &*fixed : nullptr);
          const double fit = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          EvalReport r = temporal_eval(sp, *scorer, so, m);
          r.fit_seconds = fit;
          auto roc = open_out(out / ("roc_" + m + ".csv"));
          write_roc_csv(roc, r);
          reports.push_back(std::move(r));
        }
        auto json_out = open_out(out / "report.json");
        write_report_json(json_out, reports);
        auto summary = open_out(out / "summary.csv");
        write_summary_csv(summary, reports);
        auto timings = open_out(out / "timings.csv");
        write_timings_csv(timings, reports);
        write_summary_csv(std::cout, reports);
        if (sp.discarded_unknown > 0) {
          std::cerr << "note: " << sp.discarded_unknown << " test edges touched nodes absent at t1 and were dropped\n";
        }
      }
      write_manifest(out, *eval, eval_model.seed);
    } else if (*stats) {
      const Graph g = stats_graph.load();
      const HierarchyTree built = stats_model.tree(g);
      const auto b = within_cluster_fractions(g, built);
      std::vector<double> r(b.size(), 0.0);
      for (std::size_t s = 0; s < stats_random_seeds; ++s) {
        const HierarchyTree rt = random_hierarchy(g, built.depth(), built.branching(), derive_seed(stats_model.seed, s));
        const auto f = within_cluster_fractions(g, rt);
        for (std::size_t p = 0; p < r.size(); ++p) r[p] += f[p] / static_cast<double>(stats_random_seeds);
      }
      std::ostringstream text;
      text << "level,clusters,built_pct,random_pct\n" << std::fixed << std::setprecision(2);
      for (std::size_t p = 0; p < b.size(); ++p) {
        text << p << ',' << built.num_clusters(p) << ',' << 100.0 * b[p] << ',' << 100.0 * r[p] << '\n';
      }
      std::cout << text.str();
      if (!stats_out.empty()) {
        open_out(fs::path(stats_out) / "stats.csv") << text.str();
        write_manifest(stats_out, *stats, stats_model.seed);
      }
    } else if (*generate) {
      gen.block_sizes.assign(gen_blocks, gen_block_size);
      const SnapshotPair sp = sbm_temporal(gen);
      const fs::path out(gen_out);
      auto train = open_out(out / "train.edges");
      write_edge_list(train, sp.train, false);
      auto test = open_out(out / "test.edges");
      for (const auto& [u, v] : sp.test_edges) test << sp.train.label(u) << ' ' << sp.train.label(v) << '\n';
      write_manifest(out, *generate, gen.seed);
      std::cout << sp.train.num_nodes() << " nodes, " << sp.train.num_edges() << " training edges, "
                << sp.test_edges.size() << " test edges\n";
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
