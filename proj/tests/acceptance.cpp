#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pareto_oracle.hpp"
#include "spanner/ab_solver.hpp"
#include "spanner/bench.hpp"
#include "spanner/instances.hpp"
#include "spanner/oracle.hpp"
#include "spanner/pb_solver.hpp"

using namespace spanner;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int id, const std::string& title, bool pass, const std::string& detail, double seconds) {
  std::printf("%s criterion %d (%s): %s [%.2f s]\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) { return format_double(v); }

bool close(double a, double b) { return std::abs(a - b) <= 1e-6 * (1.0 + std::abs(b)); }

bool same_optimum(double a, double b, bool integral) { return integral ? a == b : close(a, b); }

double pb_root(const Graph& g, double alpha, const PbConfig& config = {}) {
  RmpState state = initialize_rmp(g, alpha, config);
  if (config.fix_mandatory) fix_mandatory(state);
  SolveStats stats;
  const RootResult r = solve_root(state, config, stats);
  return r.converged ? r.value : std::numeric_limits<double>::quiet_NaN();
}

double ab_root(const Graph& g, double alpha, const AbOptions& options) {
  AbModel model = build_ab_model(g, alpha, options);
  const lp::LpSolution sol = solve_ab_root(model);
  return sol.status == lp::Status::kOptimal ? sol.objective : std::numeric_limits<double>::quiet_NaN();
}

AbOptions ab_plain() {
  AbOptions o;
  o.fix_unreachable = false;
  o.fix_mandatory = false;
  o.bg_bound = false;
  return o;
}

void criterion_1() {
  const auto start = Clock::now();
  const Graph c4 = make_c4_witness().graph;
  const double plain = ab_root(c4, 2.0, ab_plain());
  AbOptions unreachable = ab_plain();
  unreachable.fix_unreachable = true;
  const double fixed = ab_root(c4, 2.0, unreachable);
  const double pb = pb_root(c4, 2.0);
  const double t = seconds_since(start);
  const bool pass = close(plain, 2.0) && std::abs(fixed - pb) <= 1e-6 && t < 1.0;
  report(1, "4-cycle LP gap", pass,
         "AB root without fixing " + fmt(plain) + ", with unreachable fixing " + fmt(fixed) + ", PB root " + fmt(pb),
         t);
}

void criterion_2() {
  const auto start = Clock::now();
  const Graph g = make_k5_subdivision_witness().graph;
  AbModel model = build_ab_model(g, 5.0);
  const lp::LpSolution sol = solve_ab_root(model);
  const double ab = sol.objective;
  const double ab_without_unreachable = [&] {
    AbOptions o;
    o.fix_unreachable = false;
    return ab_root(g, 5.0, o);
  }();
  const double pb = pb_root(g, 5.0);
  const double t = seconds_since(start);
  const bool pass = ab <= 5.0 + 1e-6 && pb >= 5.0 + 1e-4 && t < 30.0;
  report(2, "K5 subdivision witness", pass,
         "AB root with all fixing " + fmt(ab) + " (needs <= 5; " + std::to_string(model.flow_fixed_zero) +
             " arcs fixed unreachable; without unreachable fixing " + fmt(ab_without_unreachable) + "), PB root " +
             fmt(pb) + " (needs >= 5.0001)",
         t);
}

struct SuiteRun {
  std::vector<SuiteCase> suite = small_oracle_suite(120, 1);
};

void criterion_3(const SuiteRun& s) {
  const auto start = Clock::now();
  int agree = 0;
  std::string first_bad;
  for (const SuiteCase& c : s.suite) {
    const Graph& g = c.instance.graph;
    const double oracle = oracle_optimum(g, c.alpha).total_weight;
    const SolveResult pb = branch_and_price(g, c.alpha);
    AbModel model = build_ab_model(g, c.alpha);
    const SolveResult ab = solve_ab(model, g);
    const bool integral = g.integral_weights();
    const bool ok = pb.status == SolveStatus::kOptimal && ab.status == SolveStatus::kOptimal &&
                    same_optimum(pb.primal_bound, oracle, integral) && same_optimum(ab.primal_bound, oracle, integral);
    if (ok) {
      ++agree;
    } else if (first_bad.empty()) {
      first_bad = "; first mismatch " + c.instance.source + ": oracle " + fmt(oracle) + " PB " +
                  fmt(pb.primal_bound) + " AB " + fmt(ab.primal_bound);
    }
  }
  const double t = seconds_since(start);
  const int total = static_cast<int>(s.suite.size());
  report(3, "oracle equivalence", total >= 100 && agree == total && t < 600.0,
         std::to_string(agree) + "/" + std::to_string(total) + " instances with PB = AB = oracle" + first_bad, t);
}

void criterion_4() {
  const auto start = Clock::now();
  std::mt19937_64 rng(77);
  int problems = 0, mismatches = 0, nonempty = 0;
  for (int round = 0; round < 600; ++round) {
    auto [g, dist, p] = testing::random_pricing(rng, round);
    const auto expected = testing::brute_front(g, p);
    ++problems;
    nonempty += !expected.empty();
    bool ok = true;
    for (std::size_t mu : {std::size_t{1}, std::size_t{2}, std::size_t{3}, kUnlimitedColumns}) {
      p.mu = mu;
      const ParetoFront got = bi_a_star_mu(g, p, &dist);
      if (got.size() != std::min(mu, expected.size())) {
        ok = false;
        continue;
      }
      for (std::size_t i = 0; i < got.size(); ++i)
        ok = ok && got[i].cost == expected[i].cost && got[i].weight == expected[i].weight;
    }
    const auto single = basic_csp(g, p, &dist);
    if (single.has_value() != !expected.empty()) ok = false;
    if (single && !expected.empty())
      ok = ok && single->cost == expected[0].cost && single->weight == expected[0].weight;
    mismatches += !ok;
  }
  const double t = seconds_since(start);
  report(4, "mu-CSP oracle", problems >= 500 && mismatches == 0 && t < 300.0,
         std::to_string(problems) + " pricing problems (" + std::to_string(nonempty) +
             " with a nonempty front), " + std::to_string(mismatches) + " mismatches",
         t);
}

std::vector<std::pair<std::string, PbConfig>> ablation_configs() {
  std::vector<std::pair<std::string, PbConfig>> out;
  auto add = [&](const std::function<void(PbConfig&)>& change) {
    PbConfig c;
    change(c);
    out.emplace_back(pb_variant_name(c), c);
  };
  add([](PbConfig&) {});
  add([](PbConfig& c) { c.metricate = false; });
  add([](PbConfig& c) { c.pairs = PairMode::kAllPairs; });
  add([](PbConfig& c) { c.fix_mandatory = false; });
  add([](PbConfig& c) { c.init = InitStrategy::kKsp1; });
  add([](PbConfig& c) { c.init = InitStrategy::kBruteForce; });
  add([](PbConfig& c) { c.prune = false; });
  add([](PbConfig& c) { c.pricer = PricerKind::kBasic; c.mu = 1; });
  add([](PbConfig& c) { c.mu = 1; });
  add([](PbConfig& c) { c.mu = 2; });
  add([](PbConfig& c) { c.mu = kUnlimitedColumns; });
  return out;
}

void criterion_5(const SuiteRun& s) {
  const auto start = Clock::now();
  const auto configs = ablation_configs();
  int differing = 0;
  std::string first_bad;
  for (const SuiteCase& c : s.suite) {
    const Graph& g = c.instance.graph;
    double root0 = 0.0, opt0 = 0.0;
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const SolveResult r = branch_and_price(g, c.alpha, configs[k].second);
      if (k == 0) {
        root0 = r.stats.root_lp;
        opt0 = r.primal_bound;
        continue;
      }
      const bool ok = r.status == SolveStatus::kOptimal && close(r.stats.root_lp, root0) &&
                      std::abs(r.primal_bound - opt0) <= 1e-6;
      if (!ok) {
        ++differing;
        if (first_bad.empty())
          first_bad = "; first difference " + c.instance.source + " " + configs[k].first + ": root " +
                      fmt(r.stats.root_lp) + " vs " + fmt(root0) + ", optimum " + fmt(r.primal_bound) + " vs " +
                      fmt(opt0);
      }
    }
  }
  const double t = seconds_since(start);
  report(5, "ablation invariance", differing == 0,
         std::to_string(configs.size()) + " configurations x " + std::to_string(s.suite.size()) + " instances, " +
             std::to_string(differing) + " differing runs" + first_bad,
         t);
}

void criterion_6(const SuiteRun& s) {
  const auto start = Clock::now();
  std::size_t pruned = 0, violations = 0;
  PbConfig config;
  config.force_pruned = true;
  for (const SuiteCase& c : s.suite) {
    const SolveResult r = branch_and_price(c.instance.graph, c.alpha, config);
    pruned += r.stats.pruned_calls;
    violations += r.stats.pruned_violations;
  }
  const double t = seconds_since(start);
  report(6, "pruning soundness", violations == 0,
         std::to_string(pruned) + " pruned calls force-executed, " + std::to_string(violations) +
             " returned a column",
         t);
}

void criterion_7(const SuiteRun& s) {
  const auto start = Clock::now();
  std::size_t violated = 0, unconverged = 0;
  const PbConfig config;
  for (const SuiteCase& c : s.suite) {
    RmpState state = initialize_rmp(c.instance.graph, c.alpha, config);
    fix_mandatory(state);
    SolveStats stats;
    const RootResult r = solve_root(state, config, stats);
    if (!r.converged) {
      ++unconverged;
      continue;
    }
    violated += !check_dual_feasibility_exhaustive(state, r.duals).empty();
  }
  const double t = seconds_since(start);
  report(7, "dual-feasibility certificate", violated == 0 && unconverged == 0,
         std::to_string(s.suite.size()) + " roots checked, " + std::to_string(violated) +
             " with an improving path, " + std::to_string(unconverged) + " unconverged",
         t);
}

void criterion_8() {
  const auto start = Clock::now();
  const auto suite = degree_suite(20, 50, 8);
  std::vector<double> gaps;
  int unsolved = 0;
  for (const SuiteCase& c : suite) {
    const SolveResult r = branch_and_price(c.instance.graph, c.alpha);
    if (r.status != SolveStatus::kOptimal) {
      ++unsolved;
      continue;
    }
    gaps.push_back(gap_percent(basic_greedy(c.instance.graph, c.alpha).total_weight, r.primal_bound));
  }
  const double t = seconds_since(start);
  const double median = quantile(gaps, 0.5);
  const double min_gap = gaps.empty() ? -1.0 : *std::min_element(gaps.begin(), gaps.end());
  const double max_gap = gaps.empty() ? -1.0 : *std::max_element(gaps.begin(), gaps.end());
  report(8, "BG quality", unsolved == 0 && gaps.size() == 50 && min_gap >= 0.0 && median <= 15.0,
         std::to_string(gaps.size()) + " instances, BG gap min " + fmt(min_gap) + "% median " + fmt(median) +
             "% max " + fmt(max_gap) + "%",
         t);
}

void criterion_9() {
  const auto start = Clock::now();
  const SuiteCase c = degree_suite(100, 1, 9).front();
  const Graph& g = c.instance.graph;
  const SolveResult pb = branch_and_price(g, c.alpha);
  const double pb_seconds = seconds_since(start);
  const auto ab_start = Clock::now();
  AbModel model = build_ab_model(g, c.alpha);
  AbLimits limits;
  limits.time_limit = 1800.0;
  const SolveResult ab = solve_ab(model, g, limits);
  const double ab_seconds = seconds_since(ab_start);
  const bool pb_ok = pb.status == SolveStatus::kOptimal && pb_seconds < 60.0;
  const bool ab_ok = (ab.status == SolveStatus::kOptimal && ab_seconds < 1800.0 &&
                      std::abs(ab.primal_bound - pb.primal_bound) <= 1e-6) ||
                     ab.status == SolveStatus::kBoundOnly;
  report(9, "desk-scale performance", pb_ok && ab_ok,
         "n=100 m=" + std::to_string(g.edge_count()) + ": PB " + to_string(pb.status) + " " + fmt(pb.primal_bound) +
             " in " + fmt(std::round(pb_seconds * 100) / 100) + " s, " + std::to_string(pb.stats.bb_nodes) +
             " nodes; AB " + to_string(ab.status) + " " + fmt(ab.primal_bound) + " in " +
             fmt(std::round(ab_seconds * 100) / 100) + " s",
         seconds_since(start));
}

void criterion_10() {
  const auto start = Clock::now();
  int equal = 0, total = 0, with_removals = 0;
  std::string first_bad;
  for (int i = 0; i < 50; ++i) {
    InstanceSpec spec;
    spec.n = 8 + i % 13;
    spec.density_mode = i % 2 == 0 ? DensityMode::kRelative : DensityMode::kDegree;
    spec.density_value = i % 2 == 0 ? 0.4 : 4.0;
    spec.weight_model = WeightModel::kUniformInt;
    spec.seed = 10000 + static_cast<std::uint64_t>(i);
    const Graph g = generate(spec).graph;
    const double alpha = i % 3 == 0 ? 1.5 : (i % 3 == 1 ? 2.0 : 3.0);
    with_removals += !metricate(g).removed.empty();
    PbConfig on, off;
    off.metricate = false;
    const SolveResult a = branch_and_price(g, alpha, on);
    const SolveResult b = branch_and_price(g, alpha, off);
    ++total;
    if (a.status == SolveStatus::kOptimal && b.status == SolveStatus::kOptimal && a.primal_bound == b.primal_bound) {
      ++equal;
    } else if (first_bad.empty()) {
      first_bad = "; first difference seed " + std::to_string(spec.seed) + ": " + fmt(a.primal_bound) + " vs " +
                  fmt(b.primal_bound);
    }
  }
  const double t = seconds_since(start);
  report(10, "metrication invariance", equal == total,
         std::to_string(equal) + "/" + std::to_string(total) + " wn instances equal (" +
             std::to_string(with_removals) + " lose edges to metrication)" + first_bad,
         t);
}

}  // namespace

int main() {
  const SuiteRun suite;
  criterion_1();
  criterion_2();
  criterion_3(suite);
  criterion_4();
  criterion_5(suite);
  criterion_6(suite);
  criterion_7(suite);
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
