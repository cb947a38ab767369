#include "spanner/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "spanner/oracle.hpp"

namespace spanner {

namespace {

using Json = nlohmann::ordered_json;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Json number_or_null(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

Json stats_json(const SolveStats& s) {
  Json j;
  j["initial_columns"] = s.initial_columns;
  j["columns_generated"] = s.columns_generated;
  j["free_columns"] = s.free_columns;
  j["pricing_calls"] = s.pricing_calls;
  j["pruned_calls"] = s.pruned_calls;
  j["pruned_violations"] = s.pruned_violations;
  const std::size_t calls = s.pricing_calls + s.pruned_calls;
  j["pruned_percent"] = calls ? 100.0 * static_cast<double>(s.pruned_calls) / static_cast<double>(calls) : 0.0;
  j["free_percent"] = s.columns_generated ? 100.0 * static_cast<double>(s.free_columns) /
                                                static_cast<double>(s.columns_generated)
                                          : 0.0;
  j["duplicate_columns"] = s.duplicate_columns;
  j["cg_rounds"] = s.cg_rounds;
  j["repair_columns"] = s.repair_columns;
  j["fixed_pairs"] = s.fixed_pairs;
  j["fixed_edges"] = s.fixed_edges;
  j["flow_variables_total"] = s.flow_variables_total;
  j["flow_variables"] = s.flow_variables;
  j["flow_fixed_zero"] = s.flow_fixed_zero;
  j["flow_fixed_one"] = s.flow_fixed_one;
  j["rows"] = s.rows;
  j["bb_nodes"] = s.bb_nodes;
  j["lp_iterations"] = s.lp_iterations;
  j["root_lp"] = number_or_null(s.root_lp);
  j["setup_seconds"] = s.setup_seconds;
  j["fixing_seconds"] = s.fixing_seconds;
  return j;
}

Json config_json(const RunConfig& c) {
  Json j;
  j["pairs"] = to_string(c.pb.pairs);
  j["metricate"] = c.pb.metricate;
  j["fix"] = c.pb.fix_mandatory;
  j["time_limit"] = number_or_null(c.pb.time_limit);
  j["node_limit"] = c.pb.node_limit == std::numeric_limits<std::size_t>::max() ? Json(nullptr) : Json(c.pb.node_limit);
  if (c.solver == SolverKind::kPb) {
    j["init"] = to_string(c.pb.init);
    j["k"] = c.pb.k;
    j["mu"] = c.pb.mu == kUnlimitedColumns ? Json("inf") : Json(c.pb.mu);
    j["pricer"] = to_string(c.pb.pricer);
    j["prune"] = c.pb.prune;
  }
  if (c.solver == SolverKind::kAb) j["bg_cutoff"] = c.prune_by_bg;
  return j;
}

std::string ab_variant_name(const RunConfig& c) {
  std::string name = "AB+";
  if (!c.pb.metricate) name += "_noM";
  if (c.pb.pairs == PairMode::kAllPairs) name += "_noE";
  if (!c.pb.fix_mandatory) name += "_noFix";
  if (!c.prune_by_bg) name += "_noBG";
  return name;
}

Instance generated(const InstanceSpec& spec, const std::string& prefix, int index) {
  Instance inst = generate(spec);
  inst.source = prefix + "-" + std::to_string(index);
  return inst;
}

}  // namespace

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::kPb: return "pb";
    case SolverKind::kAb: return "ab";
    case SolverKind::kBg: return "bg";
    case SolverKind::kOracle: return "oracle";
  }
  return "?";
}

SolverKind parse_solver(const std::string& text) {
  if (text == "pb") return SolverKind::kPb;
  if (text == "ab") return SolverKind::kAb;
  if (text == "bg") return SolverKind::kBg;
  if (text == "oracle") return SolverKind::kOracle;
  throw std::invalid_argument("unknown solver: " + text);
}

std::string pb_variant_name(const PbConfig& c) {
  const PbConfig d;
  std::string name = "PB";
  if (!c.metricate) name += "_noM";
  if (c.pairs == PairMode::kAllPairs) name += "_noE";
  if (!c.fix_mandatory) name += "_noFix";
  if (c.init == InitStrategy::kKsp1) name += "_simpleInit";
  if (c.init == InitStrategy::kBruteForce) name += "_bruteInit";
  if (c.init == InitStrategy::kKspBg && c.k != d.k) name += "_k" + std::to_string(c.k);
  if (!c.prune) name += "_noPrune";
  if (c.pricer == PricerKind::kBasic) {
    name += "_noBiA*";
  } else if (c.mu != d.mu) {
    name += c.mu == kUnlimitedColumns ? "_BiA*inf" : "_BiA*" + std::to_string(c.mu);
  }
  return name;
}

Json instance_provenance(const Instance& instance) {
  return Json::parse(instance_metadata_json(instance));
}

RunRecord run_solver(const Instance& instance, const RunConfig& config) {
  if (!(config.alpha >= 1.0)) throw std::invalid_argument("alpha must be at least 1");
  const Graph& g = instance.graph;
  RunRecord rec;
  rec.instance = instance_provenance(instance);
  rec.solver = to_string(config.solver);
  rec.config = config;
  rec.alpha = config.alpha;
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  switch (config.solver) {
    case SolverKind::kPb:
      rec.variant = pb_variant_name(config.pb);
      result = branch_and_price(g, config.alpha, config.pb);
      break;
    case SolverKind::kAb: {
      rec.variant = ab_variant_name(config);
      AbOptions opts;
      opts.fix_unreachable = config.pb.fix_mandatory;
      opts.fix_mandatory = config.pb.fix_mandatory;
      opts.bg_bound = config.prune_by_bg;
      opts.metricate = config.pb.metricate;
      opts.pairs = config.pb.pairs;
      AbModel model = build_ab_model(g, config.alpha, opts);
      AbLimits limits;
      limits.time_limit = std::max(0.0, config.pb.time_limit - seconds_since(start));
      limits.node_limit = config.pb.node_limit;
      limits.lp_pricing = config.pb.lp_pricing;
      result = solve_ab(model, g, limits);
      break;
    }
    case SolverKind::kBg:
      rec.variant = "BG";
      result.best = basic_greedy(g, config.alpha);
      result.primal_bound = result.best.total_weight;
      result.dual_bound = std::numeric_limits<double>::quiet_NaN();
      result.status = SolveStatus::kOptimal;
      break;
    case SolverKind::kOracle:
      rec.variant = "oracle";
      result.best = oracle_optimum(g, config.alpha);
      result.primal_bound = result.dual_bound = result.best.total_weight;
      result.status = SolveStatus::kOptimal;
      break;
  }
  rec.wall_seconds = seconds_since(start);
  rec.status = result.status;
  rec.primal_bound = result.primal_bound;
  rec.stats = result.stats;
  rec.edges = result.best.edge_ids;
  if (std::isfinite(result.dual_bound)) {
    rec.dual_bound = result.dual_bound;
    set_gap(rec, result.dual_bound);
  }
  return rec;
}

void set_gap(RunRecord& record, double best_dual) {
  if (best_dual > 0.0 && std::isfinite(record.primal_bound))
    record.gap_percent = gap_percent(record.primal_bound, best_dual);
}

nlohmann::ordered_json to_json(const RunRecord& r) {
  Json j;
  j["instance"] = r.instance;
  j["solver"] = r.solver;
  j["variant"] = r.variant;
  j["alpha"] = r.alpha;
  j["config"] = config_json(r.config);
  j["status"] = to_string(r.status);
  j["primal_bound"] = number_or_null(r.primal_bound);
  j["dual_bound"] = r.dual_bound ? Json(*r.dual_bound) : Json(nullptr);
  j["gap_percent"] = r.gap_percent ? Json(*r.gap_percent) : Json(nullptr);
  j["wall_seconds"] = r.wall_seconds;
  j["stats"] = stats_json(r.stats);
  j["edges"] = r.edges;
  return j;
}

std::vector<SuiteCase> small_oracle_suite(int count, std::uint64_t seed) {
  struct Combo {
    WeightModel weight;
    double alpha;
  };
  const std::vector<Combo> combos = {
      {WeightModel::kUnit, 2.0},       {WeightModel::kUnit, 3.0},       {WeightModel::kEuclidean, 1.5},
      {WeightModel::kEuclidean, 2.0},  {WeightModel::kEuclidean, 3.0},  {WeightModel::kUniformInt, 1.5},
      {WeightModel::kUniformInt, 2.0}, {WeightModel::kUniformInt, 3.0},
  };
  std::vector<SuiteCase> suite;
  for (int i = 0; i < count; ++i) {
    const Combo& c = combos[static_cast<std::size_t>(i) % combos.size()];
    InstanceSpec spec;
    spec.family = Family::kErdosRenyi;
    spec.n = 5 + (i / static_cast<int>(combos.size())) % 6;
    spec.density_mode = DensityMode::kRelative;
    spec.density_value = 0.5;
    spec.weight_model = c.weight;
    spec.seed = seed * 1000003 + static_cast<std::uint64_t>(i);
    suite.push_back({generated(spec, "small-oracle", i), c.alpha});
  }
  return suite;
}

std::vector<SuiteCase> degree_suite(int n, int count, std::uint64_t seed) {
  std::vector<SuiteCase> suite;
  for (int i = 0; i < count; ++i) {
    InstanceSpec spec;
    spec.family = Family::kErdosRenyi;
    spec.n = n;
    spec.density_mode = DensityMode::kDegree;
    spec.density_value = 4.0;
    spec.weight_model = WeightModel::kUniformInt;
    spec.seed = seed * 1000003 + static_cast<std::uint64_t>(i);
    suite.push_back({generated(spec, "degree-n" + std::to_string(n), i), 2.0});
  }
  return suite;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

void write_summary_csv(const std::vector<nlohmann::json>& records, std::ostream& out) {
  using Key = std::tuple<std::string, long, std::string, double, std::string>;
  struct Group {
    std::size_t runs = 0;
    std::size_t optimal = 0;
    std::vector<double> wall, gap, nodes, pruned, free;
  };
  auto text = [](const nlohmann::json& j, const char* key) {
    return j.contains(key) && j[key].is_string() ? j[key].get<std::string>() : std::string("-");
  };
  std::map<Key, Group> groups;
  for (const nlohmann::json& r : records) {
    const nlohmann::json& inst = r.at("instance");
    const long n = inst.contains("n") ? inst["n"].get<long>() : inst.at("nodes").get<long>();
    const Key key{text(inst, "family"), n, text(inst, "weight_model"), r.at("alpha").get<double>(),
                  r.at("variant").get<std::string>()};
    Group& g = groups[key];
    ++g.runs;
    if (r.at("status") == "optimal") ++g.optimal;
    g.wall.push_back(r.at("wall_seconds").get<double>());
    if (!r.at("gap_percent").is_null()) g.gap.push_back(r["gap_percent"].get<double>());
    const nlohmann::json& s = r.at("stats");
    g.nodes.push_back(s.at("bb_nodes").get<double>());
    g.pruned.push_back(s.at("pruned_percent").get<double>());
    g.free.push_back(s.at("free_percent").get<double>());
  }
  out << "family,n,weight,alpha,variant,runs,optimal";
  for (const char* metric : {"wall_seconds", "gap_percent", "bb_nodes", "pruned_percent", "free_percent"})
    out << ',' << metric << "_median," << metric << "_iqr";
  out << '\n';
  auto cell = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  for (const auto& [key, g] : groups) {
    out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
        << format_double(std::get<3>(key)) << ',' << std::get<4>(key) << ',' << g.runs << ',' << g.optimal;
    for (const std::vector<double>* v : {&g.wall, &g.gap, &g.nodes, &g.pruned, &g.free}) {
      const double iqr = quantile(*v, 0.75) - quantile(*v, 0.25);
      out << ',' << cell(quantile(*v, 0.5)) << ',' << cell(iqr);
    }
    out << '\n';
  }
}

}  // namespace spanner
