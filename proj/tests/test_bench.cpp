#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "spanner/bench.hpp"

using namespace spanner;

namespace {

Instance fixture(Graph g, const std::string& name) {
  Instance inst;
  inst.graph = std::move(g);
  inst.source = name;
  return inst;
}

}  // namespace

TEST_CASE("quantiles interpolate linearly") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({1, 2, 3, 4}, 0.25) == 1.75);
  CHECK(quantile({5}, 0.75) == 5.0);
  CHECK(std::isnan(quantile({}, 0.5)));
}

TEST_CASE("variant names follow the ablation labels") {
  PbConfig c;
  CHECK(pb_variant_name(c) == "PB");
  c.metricate = false;
  c.prune = false;
  CHECK(pb_variant_name(c) == "PB_noM_noPrune");
  PbConfig e;
  e.pairs = PairMode::kAllPairs;
  e.fix_mandatory = false;
  e.init = InitStrategy::kKsp1;
  CHECK(pb_variant_name(e) == "PB_noE_noFix_simpleInit");
  PbConfig b;
  b.pricer = PricerKind::kBasic;
  CHECK(pb_variant_name(b) == "PB_noBiA*");
  b.pricer = PricerKind::kBidirectional;
  b.mu = 1;
  CHECK(pb_variant_name(b) == "PB_BiA*1");
  b.mu = kUnlimitedColumns;
  CHECK(pb_variant_name(b) == "PB_BiA*inf");
  CHECK(parse_solver("ab") == SolverKind::kAb);
  CHECK_THROWS_AS(parse_solver("cplex"), std::invalid_argument);
}

TEST_CASE("run records") {
  const Instance c4 = make_c4_witness();
  RunConfig config;
  config.alpha = 2.0;
  for (SolverKind kind : {SolverKind::kPb, SolverKind::kAb, SolverKind::kOracle}) {
    config.solver = kind;
    const RunRecord r = run_solver(c4, config);
    CHECK(r.status == SolveStatus::kOptimal);
    CHECK(r.primal_bound == 4.0);
    REQUIRE(r.dual_bound);
    CHECK(*r.dual_bound <= r.primal_bound);
    CHECK(r.gap_percent == 0.0);
    CHECK(r.edges.size() == 4);
  }
  config.solver = SolverKind::kBg;
  RunRecord bg = run_solver(c4, config);
  CHECK(!bg.dual_bound);
  CHECK(!bg.gap_percent);
  set_gap(bg, 2.0);
  CHECK(bg.gap_percent == 100.0);

  config.alpha = 0.5;
  CHECK_THROWS_AS(run_solver(c4, config), std::invalid_argument);
}

TEST_CASE("record json fields") {
  const Instance p3 = fixture(build_graph({{0, 1, 1}, {1, 2, 1}}), "p3");
  RunConfig config;
  config.solver = SolverKind::kPb;
  const auto j = to_json(run_solver(p3, config));
  for (const char* key : {"instance", "solver", "variant", "alpha", "config", "status", "primal_bound", "dual_bound",
                          "gap_percent", "wall_seconds", "stats", "edges"})
    CHECK(j.contains(key));
  CHECK(j["instance"]["source"] == "p3");
  CHECK(j["status"] == "optimal");
  CHECK(j["config"]["mu"] == 3);
  CHECK(j["config"]["init"] == "kspk+bg");
  CHECK(j["primal_bound"] == 2.0);
  CHECK(j["stats"]["pruned_percent"].get<double>() >= 0.0);
  CHECK(j["stats"]["pruned_percent"].get<double>() <= 100.0);
  CHECK(nlohmann::ordered_json::parse(j.dump()) == j);
}

TEST_CASE("suites") {
  const auto suite = small_oracle_suite(24, 3);
  REQUIRE(suite.size() == 24);
  for (const SuiteCase& c : suite) {
    REQUIRE(c.instance.spec);
    CHECK(c.instance.graph.node_count() <= 10);
    CHECK(c.instance.spec->density_value == 0.5);
    if (c.instance.spec->weight_model == WeightModel::kUnit) CHECK(c.alpha == std::floor(c.alpha));
  }
  const auto again = small_oracle_suite(24, 3);
  for (std::size_t i = 0; i < suite.size(); ++i)
    CHECK(suite[i].instance.graph.edge_count() == again[i].instance.graph.edge_count());
  const auto degree = degree_suite(20, 3, 1);
  for (const SuiteCase& c : degree) {
    CHECK(c.instance.graph.node_count() == 20);
    CHECK(c.alpha == 2.0);
  }
}

TEST_CASE("summary csv groups by family, size, weights, alpha and variant") {
  std::vector<nlohmann::json> records;
  for (const SuiteCase& c : small_oracle_suite(8, 5)) {
    RunConfig config;
    config.alpha = c.alpha;
    for (SolverKind kind : {SolverKind::kPb, SolverKind::kBg}) {
      config.solver = kind;
      records.push_back(to_json(run_solver(c.instance, config)));
    }
  }
  std::ostringstream out;
  write_summary_csv(records, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("family,n,weight,alpha,variant,runs,optimal,wall_seconds_median,wall_seconds_iqr", 0) == 0);
  int rows = 0, runs = 0;
  for (std::string line; std::getline(in, line);) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    CHECK(cells[0] == "ER");
    runs += std::stoi(cells[5]);
  }
  CHECK(rows == 16);  // 8 distinct (weight, alpha) groups of n = 5, two variants each
  CHECK(runs == 16);
}
