#include "spanner/ab_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "json.hpp"

namespace spanner {

namespace {

constexpr double kIntegralityTol = 1e-6;

struct AbNode {
  std::vector<std::pair<int, double>> fixes;  // (variable, value)
  std::shared_ptr<const lp::Basis> basis;      // parent's optimal basis
  double bound = 0.0;
  int depth = 0;
  std::size_t id = 0;
};

struct AbNodeOrder {
  bool operator()(const AbNode& a, const AbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

}  // namespace

AbModel build_ab_model(const Graph& g, double alpha, const AbOptions& options) {
  if (alpha < 1.0) throw std::invalid_argument("alpha must be at least 1");
  const Deadline clock(std::numeric_limits<double>::infinity());
  AbModel model;
  model.alpha = alpha;
  if (options.metricate) {
    MetricationResult m = metricate(g);
    model.graph = std::move(m.graph);
    model.original_id = std::move(m.original_id);
  } else {
    model.graph = g;
    model.original_id.resize(g.edge_count());
    std::iota(model.original_id.begin(), model.original_id.end(), 0);
  }
  const Graph& h = model.graph;
  model.dist = all_pairs_distances(h);
  const DistanceMatrix& d = model.dist;
  model.pairs = build_terminal_pairs(h, d, alpha, options.pairs);
  const int n = h.node_count();
  const int m = h.edge_count();
  model.flow_variables_total = 2 * static_cast<std::size_t>(m) * model.pairs.size();

  lp::LinearProgram& lp = model.lp;
  for (EdgeId e = 0; e < m; ++e) model.edge_var.push_back(lp.add_variable(h.weight(e), 0.0, 1.0, "x" + std::to_string(e)));

  // Mandatory edges and directions per pair.
  std::vector<std::vector<char>> mandatory_edge(model.pairs.size());
  std::vector<std::vector<NodeId>> mandatory_from(model.pairs.size());
  double fixing = 0.0;
  if (options.fix_mandatory) {
    const double t0 = clock.elapsed();
    std::vector<char> removed(m, 0);
    for (std::size_t p = 0; p < model.pairs.size(); ++p) {
      const TerminalPair& pair = model.pairs[p];
      mandatory_edge[p].assign(m, 0);
      mandatory_from[p].assign(m, -1);
      DijkstraOptions opts;
      opts.target = pair.v;
      const auto path = shortest_path_tree(h, pair.u, opts).path_to(h, pair.v);
      for (EdgeId e : path) {
        removed[e] = 1;
        DijkstraOptions cut;
        cut.edge_removed = removed;
        cut.target = pair.v;
        const double detour = shortest_path_tree(h, pair.u, cut).dist[pair.v];
        removed[e] = 0;
        if (within_budget(detour, pair.budget)) continue;
        mandatory_edge[p][e] = 1;
        const Edge& ed = h.edge(e);
        const bool forward = within_budget(d(pair.u, ed.u) + ed.weight + d(ed.v, pair.v), pair.budget);
        const bool backward = within_budget(d(pair.u, ed.v) + ed.weight + d(ed.u, pair.v), pair.budget);
        if (forward && !backward) mandatory_from[p][e] = ed.u;
        if (backward && !forward) mandatory_from[p][e] = ed.v;
      }
    }
    std::vector<char> edge_fixed(m, 0);
    for (std::size_t p = 0; p < model.pairs.size(); ++p)
      for (EdgeId e = 0; e < m; ++e)
        if (mandatory_edge[p][e] && !edge_fixed[e]) {
          edge_fixed[e] = 1;
          lp.set_bounds(model.edge_var[e], 1.0, 1.0);
          model.fixings.push_back({-1, e, -1, -1, 1, "mandatory"});
          ++model.edges_fixed_one;
        }
    fixing += clock.elapsed() - t0;
  }

  for (std::size_t p = 0; p < model.pairs.size(); ++p) {
    const TerminalPair& pair = model.pairs[p];
    const int k = static_cast<int>(p);
    std::vector<std::vector<lp::Term>> kirch(n), outflow(n);
    std::vector<lp::Term> stretch;
    std::vector<std::vector<lp::Term>> coupling(m);
    for (EdgeId e = 0; e < m; ++e) {
      const Edge& ed = h.edge(e);
      for (int side = 0; side < 2; ++side) {
        const NodeId i = side == 0 ? ed.u : ed.v;
        const NodeId j = side == 0 ? ed.v : ed.u;
        const double t0 = clock.elapsed();
        const bool reachable = within_budget(d(pair.u, i) + ed.weight + d(j, pair.v), pair.budget);
        const bool one = options.fix_mandatory && mandatory_from[p][e] == i;
        fixing += clock.elapsed() - t0;
        if (options.fix_unreachable && !reachable) {
          model.fixings.push_back({k, e, i, j, 0, "unreachable"});
          ++model.flow_fixed_zero;
          continue;
        }
        const double lo = one ? 1.0 : 0.0;
        const int var = lp.add_variable(0.0, lo, 1.0,
                                        "f" + std::to_string(k) + "_" + std::to_string(i) + "_" + std::to_string(j));
        if (one) {
          model.fixings.push_back({k, e, i, j, 1, "mandatory"});
          ++model.flow_fixed_one;
          lp.set_bounds(var, 1.0, 1.0);
        }
        model.flows.push_back({k, e, i, j, var});
        kirch[i].push_back({var, 1.0});
        kirch[j].push_back({var, -1.0});
        outflow[i].push_back({var, 1.0});
        stretch.push_back({var, ed.weight});
        coupling[e].push_back({var, 1.0});
      }
    }
    const std::string tag = "_k" + std::to_string(k);
    for (NodeId i = 0; i < n; ++i) {
      const double rhs = (i == pair.u ? 1.0 : 0.0) - (i == pair.v ? 1.0 : 0.0);
      if (kirch[i].empty()) {
        if (rhs != 0.0) throw std::logic_error("terminal without any reachable arc");
        continue;
      }
      lp.add_row(kirch[i], lp::Sense::kEqual, rhs, "kirch" + std::to_string(i) + tag);
    }
    for (EdgeId e = 0; e < m; ++e) {
      if (coupling[e].empty()) continue;
      coupling[e].push_back({model.edge_var[e], -1.0});
      lp.add_row(coupling[e], lp::Sense::kLessEqual, 0.0, "arc" + std::to_string(e) + tag);
    }
    lp.add_row(stretch, lp::Sense::kLessEqual, pair.budget, "stretch" + tag);
    for (NodeId i = 0; i < n; ++i) {
      if (outflow[i].empty()) continue;
      const double rhs = options.strong_outflow && i == pair.v ? 0.0 : 1.0;
      lp.add_row(outflow[i], lp::Sense::kLessEqual, rhs, "out" + std::to_string(i) + tag);
    }
  }
  for (const FlowVar& f : model.flows) lp.set_integer(f.var);
  for (int x : model.edge_var) lp.set_integer(x);

  if (options.bg_bound) model.bg = basic_greedy(h, alpha);
  model.fixing_seconds = fixing;
  model.build_seconds = clock.elapsed() - fixing;
  return model;
}

lp::LpSolution solve_ab_root(AbModel& model) { return model.lp.solve(); }

SolveResult solve_ab(AbModel& model, const Graph& g, const AbLimits& limits) {
  const Deadline deadline(limits.time_limit);
  SolveResult result;
  SolveStats& stats = result.stats;
  stats.flow_variables_total = model.flow_variables_total;
  stats.flow_variables = model.flows.size();
  stats.flow_fixed_zero = model.flow_fixed_zero;
  stats.flow_fixed_one = model.flow_fixed_one;
  stats.fixed_edges = model.edges_fixed_one;
  stats.rows = static_cast<std::size_t>(model.lp.num_rows());
  stats.setup_seconds = model.build_seconds;
  stats.fixing_seconds = model.fixing_seconds;

  const Graph& h = model.graph;
  lp::LinearProgram& lp = model.lp;
  const int nvars = lp.num_variables();
  std::vector<double> base_lo(nvars), base_hi(nvars);
  for (int j = 0; j < nvars; ++j) {
    base_lo[j] = lp.lower(j);
    base_hi[j] = lp.upper(j);
  }
  const DistanceMatrix original_dist = all_pairs_distances(g);
  const bool integral = h.integral_weights();

  double incumbent = kInfinity;
  std::vector<EdgeId> incumbent_edges;
  if (model.bg) {
    incumbent = model.bg->total_weight;
    incumbent_edges = model.bg->edge_ids;
  }

  std::priority_queue<AbNode, std::vector<AbNode>, AbNodeOrder> open;
  std::size_t next_id = 0;
  open.push(AbNode{{}, nullptr, 0.0, 0, next_id++});
  bool limit_hit = false;
  lp::SolveOptions options;
  options.pricing = limits.lp_pricing;

  while (!open.empty()) {
    AbNode node = open.top();
    open.pop();
    if (bound_prunes(node.bound, incumbent, integral)) continue;
    if (deadline.expired() || stats.bb_nodes >= limits.node_limit) {
      open.push(std::move(node));
      limit_hit = true;
      break;
    }
    ++stats.bb_nodes;
    for (int j = 0; j < nvars; ++j) lp.set_bounds(j, base_lo[j], base_hi[j]);
    bool conflict = false;
    for (const auto& [var, value] : node.fixes) {
      if (value < base_lo[var] || value > base_hi[var]) conflict = true;
      else lp.set_bounds(var, value, value);
    }
    if (conflict) continue;
    if (node.basis) lp.set_basis(*node.basis);

    options.time_limit = std::isfinite(limits.time_limit) ? std::max(0.0, limits.time_limit - deadline.elapsed()) : lp::kInf;
    const lp::LpSolution sol = lp.solve(options);
    stats.lp_iterations += sol.iterations;
    if (sol.status == lp::Status::kIterationLimit) {
      open.push(std::move(node));
      limit_hit = true;
      break;
    }
    if (sol.status == lp::Status::kInfeasible) continue;
    if (sol.status != lp::Status::kOptimal) throw std::runtime_error("AB LP failed: " + lp::to_string(sol.status));
    if (node.id == 0) stats.root_lp = sol.objective;
    const double z = std::max(sol.objective, node.bound);
    if (bound_prunes(z, incumbent, integral)) continue;

    int branch = -1;
    double best_frac = 0.0;
    for (EdgeId e = 0; e < h.edge_count(); ++e) {
      const double x = sol.primal[model.edge_var[e]];
      const double frac = std::min(x, 1.0 - x);
      if (frac <= kIntegralityTol) continue;
      const bool better = branch < 0 || frac > best_frac + 1e-12 ||
                          (frac >= best_frac - 1e-12 && h.weight(e) > h.weight(branch));
      if (better) {
        branch = e;
        best_frac = frac;
      }
    }
    int branch_var = branch >= 0 ? model.edge_var[branch] : -1;

    if (branch_var < 0) {
      std::vector<EdgeId> chosen;
      double weight = 0.0;
      for (EdgeId e = 0; e < h.edge_count(); ++e)
        if (sol.primal[model.edge_var[e]] >= 1.0 - kIntegralityTol) {
          chosen.push_back(e);
          weight += h.weight(e);
        }
      if (verify_spanner(h, model.dist, model.alpha, chosen, PairMode::kAllPairs).feasible) {
        if (!std::isfinite(incumbent) || weight < incumbent - 1e-9 * std::max(1.0, incumbent)) {
          incumbent = weight;
          incumbent_edges = std::move(chosen);
        }
        continue;
      }
      // Integral edges whose flows do not certify a spanner: branch on a flow.
      best_frac = 0.0;
      for (const FlowVar& f : model.flows) {
        const double x = sol.primal[f.var];
        const double frac = std::min(x, 1.0 - x);
        if (frac > kIntegralityTol && frac > best_frac + 1e-12) {
          best_frac = frac;
          branch_var = f.var;
        }
      }
      if (branch_var < 0) throw std::logic_error("integral AB solution is not a spanner");
    }

    const auto basis = std::make_shared<const lp::Basis>(lp.basis());
    AbNode zero{node.fixes, basis, z, node.depth + 1, next_id++};
    zero.fixes.emplace_back(branch_var, 0.0);
    AbNode one{node.fixes, basis, z, node.depth + 1, next_id++};
    one.fixes.emplace_back(branch_var, 1.0);
    open.push(std::move(zero));
    open.push(std::move(one));
  }
  for (int j = 0; j < nvars; ++j) lp.set_bounds(j, base_lo[j], base_hi[j]);

  if (std::isfinite(incumbent)) {
    std::vector<EdgeId> ids;
    for (EdgeId e : incumbent_edges) ids.push_back(model.original_id[e]);
    result.best = make_solution(g, std::move(ids));
    if (!verify_spanner(g, original_dist, model.alpha, result.best.edge_ids, PairMode::kAllPairs).feasible)
      throw std::logic_error("incumbent is not an alpha-spanner");
    result.best.feasible_for_alpha = model.alpha;
    result.primal_bound = result.best.total_weight;
  }
  if (!limit_hit) {
    result.status = std::isfinite(incumbent) ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    result.dual_bound = result.primal_bound;
  } else {
    result.status = SolveStatus::kBoundOnly;
    double lower = result.primal_bound;
    while (!open.empty()) {
      lower = std::min(lower, open.top().bound);
      open.pop();
    }
    result.dual_bound = lower;
  }
  stats.wall_seconds = deadline.elapsed() + model.build_seconds + model.fixing_seconds;
  return result;
}

void export_lp(const AbModel& model, const std::filesystem::path& path) { lp::write_lp_file(model.lp, path.string()); }

std::string fixing_ledger_json(const AbModel& model) {
  nlohmann::ordered_json j;
  j["alpha"] = model.alpha;
  j["pairs"] = model.pairs.size();
  j["flow_variables_total"] = model.flow_variables_total;
  j["flow_variables"] = model.flows.size();
  j["flow_fixed_zero"] = model.flow_fixed_zero;
  j["flow_fixed_one"] = model.flow_fixed_one;
  j["edges_fixed_one"] = model.edges_fixed_one;
  j["build_seconds"] = model.build_seconds;
  j["fixing_seconds"] = model.fixing_seconds;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const FixRecord& f : model.fixings) {
    nlohmann::ordered_json r;
    if (f.pair >= 0) {
      r["pair"] = {model.pairs[f.pair].u, model.pairs[f.pair].v};
      r["arc"] = {f.from, f.to};
    }
    r["edge"] = model.original_id[f.edge];
    r["value"] = f.value;
    r["reason"] = f.reason;
    list.push_back(std::move(r));
  }
  j["fixed"] = std::move(list);
  return j.dump(2);
}

}  // namespace spanner
