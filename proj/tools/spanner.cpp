#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spanner/ab_solver.hpp"
#include "spanner/bench.hpp"
#include "spanner/instances.hpp"
#include "spanner/oracle.hpp"

namespace fs = std::filesystem;
using namespace spanner;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitLimit = 2;
constexpr int kExitMismatch = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverFlags {
  std::string solver = "pb";
  double alpha = 2.0;
  std::string pairs = "adjacent";
  std::string init = "kspk+bg";
  std::size_t k = 10;
  std::string mu;  // empty: default
  std::string pricer = "bia";
  bool no_metricate = false;
  bool no_fix = false;
  bool no_prune = false;
  double time_limit = std::numeric_limits<double>::infinity();
  std::size_t node_limit = std::numeric_limits<std::size_t>::max();
  std::string out;
  std::string format = "edge_list";
};

void add_model_flags(CLI::App& app, SolverFlags& f) {
  app.add_option("--alpha", f.alpha, "Stretch factor (>= 1)")->check(CLI::Range(1.0, 1e9));
  app.add_option("--pairs", f.pairs, "Terminal pairs")->check(CLI::IsMember({"adjacent", "all"}));
  app.add_flag("--no-metricate", f.no_metricate, "Keep edges longer than their endpoint distance");
  app.add_flag("--no-fix", f.no_fix, "Disable mandatory and unreachable fixing");
}

void add_solver_flags(CLI::App& app, SolverFlags& f) {
  add_model_flags(app, f);
  app.add_option("--init", f.init, "PB initial columns")->check(CLI::IsMember({"ksp1", "kspk+bg", "brute"}));
  app.add_option("--k", f.k, "Paths per pair for kspk+bg")->check(CLI::PositiveNumber);
  app.add_option("--mu", f.mu, "Columns per pricing call (default 3)")
      ->check(CLI::IsMember({"1", "2", "3", "inf"}));
  app.add_option("--pricer", f.pricer, "Pricing algorithm")->check(CLI::IsMember({"basic", "bia"}));
  app.add_flag("--no-prune", f.no_prune, "Disable the pricing cache");
  app.add_option("--time-limit", f.time_limit, "Wall-clock limit in seconds")->check(CLI::NonNegativeNumber);
  app.add_option("--node-limit", f.node_limit, "Branch-and-bound node limit")->check(CLI::PositiveNumber);
}

RunConfig run_config(const SolverFlags& f, SolverKind solver) {
  if (f.pricer == "basic" && !f.mu.empty() && f.mu != "1")
    throw UsageError("--pricer basic returns one column per call; it conflicts with --mu " + f.mu);
  RunConfig c;
  c.solver = solver;
  c.alpha = f.alpha;
  c.pb.pairs = parse_pair_mode(f.pairs);
  c.pb.init = parse_init_strategy(f.init);
  c.pb.k = f.k;
  if (!f.mu.empty()) c.pb.mu = f.mu == "inf" ? kUnlimitedColumns : static_cast<std::size_t>(std::stoul(f.mu));
  c.pb.pricer = parse_pricer(f.pricer);
  if (c.pb.pricer == PricerKind::kBasic) c.pb.mu = 1;
  c.pb.metricate = !f.no_metricate;
  c.pb.fix_mandatory = !f.no_fix;
  c.pb.prune = !f.no_prune;
  c.pb.time_limit = f.time_limit;
  c.pb.node_limit = f.node_limit;
  return c;
}

Instance load(const std::string& path, const std::string& format) {
  if (!fs::exists(path)) throw UsageError("missing file: " + path);
  Instance inst = read_instance(path, parse_file_format(format));
  const fs::path sidecar = path + ".json";
  if (fs::exists(sidecar)) {
    std::ifstream in(sidecar);
    const nlohmann::json meta = nlohmann::json::parse(in);
    InstanceSpec spec;
    spec.family = parse_family(meta.at("family").get<std::string>());
    spec.n = meta.at("n").get<int>();
    spec.density_mode = parse_density_mode(meta.at("density_mode").get<std::string>());
    spec.density_value = meta.at("density_value").get<double>();
    spec.weight_model = parse_weight_model(meta.at("weight_model").get<std::string>());
    spec.seed = meta.at("seed").get<std::uint64_t>();
    spec.waxman_beta = meta.value("waxman_beta", spec.waxman_beta);
    inst.spec = spec;
    inst.resample_count = meta.value("resample_count", 0);
    inst.waxman_gamma = meta.value("waxman_gamma", 0.0);
  }
  return inst;
}

/// --out, else $SPANNER_OUT_DIR, else `fallback` (empty: no files).
std::optional<fs::path> output_dir(const std::string& flag, const std::string& fallback) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv("SPANNER_OUT_DIR"); env && *env) return fs::path(env);
  if (!fallback.empty()) return fs::path(fallback);
  return std::nullopt;
}

/// Appends (or rewrites) results.jsonl in `dir` and regenerates summary.csv
/// from every record in it.
void write_results(const fs::path& dir, const std::vector<Json>& records, bool append) {
  fs::create_directories(dir);
  const fs::path jsonl = dir / "results.jsonl";
  {
    std::ofstream out(jsonl, append ? std::ios::app : std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + jsonl.string());
    for (const Json& r : records) out << r.dump() << '\n';
  }
  std::vector<nlohmann::json> all;
  std::ifstream in(jsonl);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) all.push_back(nlohmann::json::parse(line));
  std::ofstream csv(dir / "summary.csv");
  write_summary_csv(all, csv);
}

int cmd_generate(const std::string& family, int n, const std::string& mode, double density,
                 const std::string& weights, std::uint64_t seed, double beta, const std::string& out) {
  InstanceSpec spec;
  spec.family = parse_family(family);
  spec.n = n;
  spec.density_mode = parse_density_mode(mode);
  spec.density_value = density;
  spec.weight_model = parse_weight_model(weights);
  spec.seed = seed;
  spec.waxman_beta = beta;
  Instance inst = generate(spec);
  if (out.empty()) {
    write_edge_list(inst.graph, std::cout);
    return kExitOk;
  }
  inst.source = out;
  write_instance(inst, out);
  std::cout << instance_metadata_json(inst) << '\n';
  return kExitOk;
}

int cmd_solve(const std::string& file, const SolverFlags& f) {
  const Instance inst = load(file, f.format);
  const RunRecord rec = run_solver(inst, run_config(f, parse_solver(f.solver)));
  const Json j = to_json(rec);
  std::cout << j.dump() << '\n';
  if (const auto dir = output_dir(f.out, "")) write_results(*dir, {j}, true);
  return rec.status == SolveStatus::kOptimal ? kExitOk : kExitLimit;
}

int cmd_oracle(const std::string& file, const SolverFlags& f) {
  const Instance inst = load(file, f.format);
  RunConfig c;
  c.solver = SolverKind::kOracle;
  c.alpha = f.alpha;
  const Json j = to_json(run_solver(inst, c));
  std::cout << j.dump() << '\n';
  if (const auto dir = output_dir(f.out, "")) write_results(*dir, {j}, true);
  return kExitOk;
}

std::vector<EdgeId> parse_edge_ids(const std::string& text, int edge_count) {
  std::vector<EdgeId> ids;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int id = -1;
    try {
      id = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || id < 0 || id >= edge_count) throw UsageError("bad edge id: " + item);
    ids.push_back(id);
  }
  return ids;
}

int cmd_verify(const std::string& file, const SolverFlags& f, const std::string& edges_text,
               const std::string& subgraph_file) {
  const Instance inst = load(file, f.format);
  const Graph& g = inst.graph;
  std::vector<EdgeId> ids;
  if (!edges_text.empty()) {
    ids = parse_edge_ids(edges_text, g.edge_count());
  } else if (!subgraph_file.empty()) {
    const Instance sub = load(subgraph_file, f.format);
    for (const Edge& e : sub.graph.edges()) {
      const auto id = g.find_edge(e.u, e.v);
      if (!id) throw UsageError("subgraph edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                                " is not in the graph");
      ids.push_back(*id);
    }
  } else {
    for (EdgeId e = 0; e < g.edge_count(); ++e) ids.push_back(e);
  }
  const SpannerSolution sol = make_solution(g, ids);
  const VerifyResult v = verify_spanner(g, f.alpha, sol.edge_ids, parse_pair_mode(f.pairs));
  Json j;
  j["instance"] = instance_provenance(inst);
  j["alpha"] = f.alpha;
  j["pairs"] = f.pairs;
  j["feasible"] = v.feasible;
  j["worst_ratio"] = std::isfinite(v.worst_ratio) ? Json(v.worst_ratio) : Json(nullptr);
  j["worst_u"] = v.worst_u;
  j["worst_v"] = v.worst_v;
  j["weight"] = sol.total_weight;
  j["edges"] = sol.edge_ids;
  std::cout << j.dump() << '\n';
  return v.feasible ? kExitOk : kExitLimit;
}

int cmd_export(const std::string& file, const SolverFlags& f, const std::string& ledger) {
  if (f.out.empty()) throw UsageError("export-lp needs --out");
  const Instance inst = load(file, f.format);
  AbOptions opts;
  opts.fix_unreachable = opts.fix_mandatory = !f.no_fix;
  opts.metricate = !f.no_metricate;
  opts.pairs = parse_pair_mode(f.pairs);
  const AbModel model = build_ab_model(inst.graph, f.alpha, opts);
  export_lp(model, f.out);
  const std::string ledger_path = ledger.empty() ? f.out + ".fixings.json" : ledger;
  std::ofstream(ledger_path) << fixing_ledger_json(model) << '\n';
  Json j;
  j["lp_file"] = f.out;
  j["ledger"] = ledger_path;
  j["variables"] = model.lp.num_variables();
  j["rows"] = model.lp.num_rows();
  j["flow_variables_total"] = model.flow_variables_total;
  j["flow_variables"] = model.flows.size();
  std::cout << j.dump() << '\n';
  return kExitOk;
}

bool same_value(double a, double b, bool integral) {
  return integral ? a == b : std::abs(a - b) <= 1e-6 * (1.0 + std::abs(b));
}

struct BenchOutcome {
  std::vector<Json> records;
  bool limit_hit = false;
  bool mismatch = false;
};

/// Runs `configs` on every case; all exact solvers must agree on the optimum,
/// and on the root LP when `compare_root` is set. BG gaps use the best dual.
BenchOutcome run_bench(const std::vector<SuiteCase>& suite, const std::vector<RunConfig>& configs,
                       bool compare_root) {
  BenchOutcome outcome;
  for (const SuiteCase& c : suite) {
    std::vector<RunRecord> recs;
    for (RunConfig config : configs) {
      config.alpha = c.alpha;
      recs.push_back(run_solver(c.instance, config));
    }
    double best_dual = 0.0;
    std::optional<double> optimum, root;
    const bool integral = c.instance.graph.integral_weights();
    for (const RunRecord& r : recs) {
      if (r.solver == "bg") continue;
      if (r.dual_bound) best_dual = std::max(best_dual, *r.dual_bound);
      if (r.status != SolveStatus::kOptimal) {
        outcome.limit_hit = true;
        continue;
      }
      if (!optimum) optimum = r.primal_bound;
      if (!same_value(r.primal_bound, *optimum, integral)) outcome.mismatch = true;
      if (compare_root && r.solver == "pb" && std::isfinite(r.stats.root_lp)) {
        if (!root) root = r.stats.root_lp;
        if (std::abs(r.stats.root_lp - *root) > 1e-6 * (1.0 + std::abs(*root))) outcome.mismatch = true;
      }
    }
    for (RunRecord& r : recs) {
      if (r.solver == "bg") set_gap(r, best_dual);
      outcome.records.push_back(to_json(r));
      std::cerr << c.instance.source << ' ' << r.variant << ' ' << to_string(r.status) << ' '
                << format_double(r.primal_bound) << ' ' << format_double(r.wall_seconds) << "s\n";
    }
    if (outcome.mismatch) std::cerr << "mismatch on " << c.instance.source << '\n';
  }
  return outcome;
}

int cmd_bench(const std::string& suite_name, int count, std::uint64_t seed, const SolverFlags& f,
              const std::vector<std::string>& solvers) {
  const RunConfig base = run_config(f, SolverKind::kPb);
  auto with = [&](SolverKind kind) {
    RunConfig c = base;
    c.solver = kind;
    return c;
  };
  std::vector<SuiteCase> suite;
  std::vector<RunConfig> configs;
  bool compare_root = false;
  if (suite_name == "small-oracle") {
    suite = small_oracle_suite(count > 0 ? count : 120, seed);
    configs = {with(SolverKind::kPb), with(SolverKind::kAb), with(SolverKind::kOracle), with(SolverKind::kBg)};
  } else if (suite_name == "ablation") {
    suite = small_oracle_suite(count > 0 ? count : 120, seed);
    const PbConfig d;
    auto variant = [&](auto&& change) {
      RunConfig c = with(SolverKind::kPb);
      c.pb = d;
      c.pb.time_limit = base.pb.time_limit;
      c.pb.node_limit = base.pb.node_limit;
      change(c.pb);
      configs.push_back(c);
    };
    variant([](PbConfig&) {});
    variant([](PbConfig& p) { p.metricate = false; });
    variant([](PbConfig& p) { p.pairs = PairMode::kAllPairs; });
    variant([](PbConfig& p) { p.fix_mandatory = false; });
    variant([](PbConfig& p) { p.init = InitStrategy::kKsp1; });
    variant([](PbConfig& p) { p.init = InitStrategy::kBruteForce; });
    variant([](PbConfig& p) { p.prune = false; });
    variant([](PbConfig& p) { p.pricer = PricerKind::kBasic; p.mu = 1; });
    variant([](PbConfig& p) { p.mu = 1; });
    variant([](PbConfig& p) { p.mu = kUnlimitedColumns; });
    compare_root = true;
  } else if (suite_name == "bg-gap") {
    suite = degree_suite(20, count > 0 ? count : 50, seed);
    configs = {with(SolverKind::kPb), with(SolverKind::kBg)};
  } else if (suite_name == "desk") {
    suite = degree_suite(100, count > 0 ? count : 1, seed);
    RunConfig ab = with(SolverKind::kAb);
    if (!std::isfinite(ab.pb.time_limit)) ab.pb.time_limit = 1800.0;
    configs = {with(SolverKind::kPb), ab, with(SolverKind::kBg)};
  } else {
    throw UsageError("unknown suite: " + suite_name);
  }
  if (!solvers.empty()) {
    std::vector<RunConfig> kept;
    for (const RunConfig& c : configs)
      for (const std::string& s : solvers)
        if (to_string(c.solver) == s) kept.push_back(c);
    configs = kept;
  }
  const BenchOutcome outcome = run_bench(suite, configs, compare_root);
  const fs::path dir = *output_dir(f.out, "spanner-out");
  write_results(dir, outcome.records, false);
  Json j;
  j["suite"] = suite_name;
  j["instances"] = suite.size();
  j["runs"] = outcome.records.size();
  j["agree"] = !outcome.mismatch;
  j["limit_hit"] = outcome.limit_hit;
  j["results"] = (dir / "results.jsonl").string();
  j["summary"] = (dir / "summary.csv").string();
  std::cout << j.dump() << '\n';
  if (outcome.mismatch) return kExitMismatch;
  return outcome.limit_hit ? kExitLimit : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact minimum-weight multiplicative spanners"};
  app.require_subcommand(1);
  SolverFlags f;

  auto* gen = app.add_subcommand("generate", "Sample a random instance");
  std::string family = "ER", mode = "degree", weights = "w1";
  int n = 10;
  double density = 4.0, beta = 0.14;
  std::uint64_t seed = 1;
  gen->add_option("--family", family)->check(CLI::IsMember({"ER", "WM", "CMP", "er", "wm", "cmp"}));
  gen->add_option("--n", n)->check(CLI::PositiveNumber);
  gen->add_option("--density-mode", mode)->check(CLI::IsMember({"relative", "degree", "complete"}));
  gen->add_option("--density", density, "Relative density or average degree");
  gen->add_option("--weights", weights)->check(CLI::IsMember({"w1", "euc", "wn"}));
  gen->add_option("--beta", beta, "Waxman distance scale");
  gen->add_option("--seed", seed);
  gen->add_option("--out", f.out, "Edge-list file (stdout when omitted)");

  std::string file;
  auto add_file = [&](CLI::App* cmd) {
    cmd->add_option("instance", file, "Instance file")->required();
    cmd->add_option("--format", f.format)->check(CLI::IsMember({"edge_list", "stp"}));
  };

  auto* solve = app.add_subcommand("solve", "Solve one instance");
  add_file(solve);
  add_solver_flags(*solve, f);
  solve->add_option("--solver", f.solver)->check(CLI::IsMember({"pb", "ab", "bg"}));
  solve->add_option("--out", f.out, "Output directory for results.jsonl and summary.csv");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum of a small instance");
  add_file(oracle);
  oracle->add_option("--alpha", f.alpha)->check(CLI::Range(1.0, 1e9));
  oracle->add_option("--out", f.out, "Output directory for results.jsonl and summary.csv");

  auto* verify = app.add_subcommand("verify", "Check the stretch of a subgraph");
  add_file(verify);
  std::string edges_text, subgraph_file;
  verify->add_option("--alpha", f.alpha)->check(CLI::Range(1.0, 1e9));
  std::string verify_pairs = "all";
  verify->add_option("--pairs", verify_pairs)->check(CLI::IsMember({"adjacent", "all"}));
  auto* edges_opt = verify->add_option("--edges", edges_text, "Comma-separated edge ids (default: all)");
  verify->add_option("--subgraph", subgraph_file, "Edge-list file of the subgraph")->excludes(edges_opt);

  auto* exp = app.add_subcommand("export-lp", "Write the arc-based model as an LP file");
  add_file(exp);
  add_model_flags(*exp, f);
  std::string ledger;
  exp->add_option("--out", f.out, "LP file")->required();
  exp->add_option("--ledger", ledger, "Fixing ledger JSON (default: <out>.fixings.json)");

  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  std::string suite_name = "small-oracle";
  int count = 0;
  std::vector<std::string> solvers;
  bench->add_option("--suite", suite_name)->check(CLI::IsMember({"small-oracle", "ablation", "bg-gap", "desk"}));
  bench->add_option("--count", count, "Number of instances (suite default when 0)")->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", seed);
  bench->add_option("--solver", solvers, "Restrict to these solvers")
      ->check(CLI::IsMember({"pb", "ab", "bg", "oracle"}));
  add_solver_flags(*bench, f);
  bench->add_option("--out", f.out, "Output directory (default: $SPANNER_OUT_DIR or spanner-out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(family, n, mode, density, weights, seed, beta, f.out);
    if (*solve) return cmd_solve(file, f);
    if (*oracle) return cmd_oracle(file, f);
    if (*verify) {
      f.pairs = verify_pairs;
      return cmd_verify(file, f, edges_text, subgraph_file);
    }
    if (*exp) return cmd_export(file, f, ledger);
    if (*bench) return cmd_bench(suite_name, count, seed, f, solvers);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InstanceError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OracleSizeError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
