#include "spanner/pb_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <memory>
#include <queue>
#include <stdexcept>

namespace spanner {

namespace {

// Columns must beat sigma by this much to count as improving.
constexpr double kPriceTol = 1e-7;
constexpr double kIntegralityTol = 1e-6;
constexpr double kDualZero = 1e-12;

double path_weight(const Graph& g, std::span<const EdgeId> edges) {
  double w = 0.0;
  for (EdgeId e : edges) w += g.weight(e);
  return w;
}

PathColumn make_column(const Graph& g, const TerminalPair& pair, std::vector<EdgeId> edges) {
  PathColumn c;
  c.pair = pair;
  c.weight = path_weight(g, edges);
  c.edges = std::move(edges);
  return c;
}

enum class CgOutcome { kOptimal, kInfeasible, kLimit };

struct CgResult {
  CgOutcome outcome = CgOutcome::kLimit;
  double value = 0.0;
  lp::LpSolution lp;
  DualSolution duals;
};

CgResult column_generation(RmpState& s, const PbConfig& config, std::span<const EdgeId> local_zero,
                           PricingCache& cache, SolveStats& stats, const Deadline& deadline) {
  lp::SolveOptions options;
  options.pricing = config.lp_pricing;
  for (std::size_t round = 0;; ++round) {
    if (round >= config.cg_round_limit || deadline.expired()) return {};
    CgResult r;
    r.lp = s.lp.solve(options);
    stats.lp_iterations += r.lp.iterations;
    if (r.lp.status == lp::Status::kInfeasible) {
      r.outcome = CgOutcome::kInfeasible;
      return r;
    }
    if (r.lp.status != lp::Status::kOptimal)
      throw std::runtime_error("restricted master LP failed: " + lp::to_string(r.lp.status));
    r.duals = extract_duals(s, r.lp);
    ++stats.cg_rounds;
    if (price_all(s, r.duals, cache, config, local_zero, stats) == 0) {
      r.outcome = CgOutcome::kOptimal;
      r.value = r.lp.objective;
      return r;
    }
  }
}

// Makes sure every pair keeps a column avoiding `zero`; adds the shortest
// such path when needed. False when some pair has no feasible path left.
bool ensure_feasible(RmpState& s, std::span<const EdgeId> zero, SolveStats& stats) {
  if (zero.empty()) return true;
  std::vector<char> removed(s.graph.edge_count(), 0);
  for (EdgeId e : zero) removed[e] = 1;
  for (std::size_t p = 0; p < s.pairs.size(); ++p) {
    bool ok = false;
    for (int c : s.pair_columns[p]) {
      const auto& edges = s.columns[c].path.edges;
      if (std::none_of(edges.begin(), edges.end(), [&](EdgeId e) { return removed[e] != 0; })) {
        ok = true;
        break;
      }
    }
    if (ok) continue;
    if (s.pair_fixed[p]) return false;
    const TerminalPair& pair = s.pairs[p];
    DijkstraOptions opts;
    opts.edge_removed = removed;
    opts.target = pair.v;
    const ShortestPathTree tree = shortest_path_tree(s.graph, pair.u, opts);
    if (!within_budget(tree.dist[pair.v], pair.budget)) return false;
    if (s.add_column(static_cast<int>(p), make_column(s.graph, pair, tree.path_to(s.graph, pair.v))))
      ++stats.repair_columns;
  }
  return true;
}

struct Node {
  std::vector<EdgeId> zero;
  std::vector<EdgeId> one;
  std::shared_ptr<const lp::Basis> basis;  // parent's optimal basis
  double bound = 0.0;
  int depth = 0;
  std::size_t id = 0;
};

struct NodeOrder {
  // priority_queue pops the "largest": lowest bound, then deepest, then oldest.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

}  // namespace

std::string to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::kKsp1: return "ksp1";
    case InitStrategy::kKspBg: return "kspk+bg";
    case InitStrategy::kBruteForce: return "brute";
  }
  return "?";
}

std::string to_string(PricerKind p) { return p == PricerKind::kBasic ? "basic" : "bia"; }

InitStrategy parse_init_strategy(const std::string& text) {
  if (text == "ksp1") return InitStrategy::kKsp1;
  if (text == "kspk+bg") return InitStrategy::kKspBg;
  if (text == "brute") return InitStrategy::kBruteForce;
  throw std::invalid_argument("unknown init strategy: " + text);
}

PricerKind parse_pricer(const std::string& text) {
  if (text == "basic") return PricerKind::kBasic;
  if (text == "bia") return PricerKind::kBidirectional;
  throw std::invalid_argument("unknown pricer: " + text);
}

std::optional<int> RmpState::add_column(int pair, const PathColumn& path) {
  if (!known_paths[pair].insert(path.edges).second) return std::nullopt;
  std::vector<lp::Term> terms;
  terms.reserve(path.edges.size() + 1);
  terms.push_back({pair_row[pair], 1.0});
  for (EdgeId e : path.edges) {
    auto it = edge_rows[pair].find(e);
    if (it == edge_rows[pair].end()) {
      const lp::Term x{edge_var[e], -1.0};
      const int row = lp.add_row(std::span<const lp::Term>(&x, 1), lp::Sense::kLessEqual, 0.0,
                                 "e" + std::to_string(e) + "_k" + std::to_string(pair));
      it = edge_rows[pair].emplace(e, row).first;
    }
    terms.push_back({it->second, 1.0});
  }
  const int index = static_cast<int>(columns.size());
  const int var = lp.add_column(0.0, terms, 0.0, lp::kInf,
                                "y" + std::to_string(pair) + "_" + std::to_string(pair_columns[pair].size()));
  columns.push_back({path, pair, var});
  pair_columns[pair].push_back(index);
  return index;
}

RmpState initialize_rmp(const Graph& g, double alpha, const PbConfig& config) {
  RmpState s;
  s.alpha = alpha;
  if (config.metricate) {
    MetricationResult m = metricate(g);
    s.graph = std::move(m.graph);
    s.original_id = std::move(m.original_id);
  } else {
    s.graph = g;
    s.original_id.resize(g.edge_count());
    std::iota(s.original_id.begin(), s.original_id.end(), 0);
  }
  s.dist = all_pairs_distances(s.graph);
  s.pairs = build_terminal_pairs(s.graph, s.dist, alpha, config.pairs);

  const int m = s.graph.edge_count();
  const std::size_t k = s.pairs.size();
  for (EdgeId e = 0; e < m; ++e) s.edge_var.push_back(s.lp.add_variable(s.graph.weight(e), 0.0, 1.0, "x" + std::to_string(e)));
  s.base_lo.assign(m, 0.0);
  s.base_hi.assign(m, 1.0);
  for (std::size_t p = 0; p < k; ++p)
    s.pair_row.push_back(s.lp.add_row({}, lp::Sense::kGreaterEqual, 1.0, "k" + std::to_string(p)));
  s.edge_rows.resize(k);
  s.pair_columns.resize(k);
  s.known_paths.resize(k);
  s.pair_fixed.assign(k, 0);
  s.unique_known.assign(k, std::nullopt);

  std::vector<char> outside_bg;
  if (config.init == InitStrategy::kKspBg) {
    SpannerSolution h = basic_greedy(s.graph, alpha);
    outside_bg.assign(m, 1);
    for (EdgeId e : h.edge_ids) outside_bg[e] = 0;
    s.incumbent = std::move(h);
  }

  for (std::size_t p = 0; p < k; ++p) {
    const TerminalPair& pair = s.pairs[p];
    std::vector<PathColumn> seed;
    switch (config.init) {
      case InitStrategy::kKsp1:
        seed = k_shortest_bounded(s.graph, s.dist, pair, 1);
        break;
      case InitStrategy::kKspBg:
        seed = k_shortest_bounded(s.graph, s.dist, pair, std::max<std::size_t>(config.k, 1));
        if (config.k >= 2) s.unique_known[p] = seed.size() == 1;
        break;
      case InitStrategy::kBruteForce:
        seed = enumerate_all_bounded(s.graph, s.dist, pair);
        s.unique_known[p] = seed.size() == 1;
        break;
    }
    for (const PathColumn& c : seed) s.add_column(static_cast<int>(p), c);
    if (config.init == InitStrategy::kKspBg) {
      DijkstraOptions opts;
      opts.edge_removed = outside_bg;
      opts.target = pair.v;
      const ShortestPathTree tree = shortest_path_tree(s.graph, pair.u, opts);
      if (within_budget(tree.dist[pair.v], pair.budget))
        s.add_column(static_cast<int>(p), make_column(s.graph, pair, tree.path_to(s.graph, pair.v)));
    }
  }
  s.initial_columns = s.columns.size();
  return s;
}

std::size_t fix_mandatory(RmpState& s) {
  std::size_t fixed = 0;
  for (std::size_t p = 0; p < s.pairs.size(); ++p) {
    if (s.pair_fixed[p]) continue;
    std::optional<PathColumn> only;
    if (s.unique_known[p]) {
      if (!*s.unique_known[p]) continue;
      only = s.columns[s.pair_columns[p].front()].path;
    } else {
      only = unique_path_detect(s.graph, s.dist, s.pairs[p]);
      if (!only) continue;
    }
    s.add_column(static_cast<int>(p), *only);
    for (int c : s.pair_columns[p])
      if (s.columns[c].path.edges == only->edges) s.lp.fix_variable(s.columns[c].var, 1.0);
    for (EdgeId e : only->edges) {
      s.base_lo[e] = s.base_hi[e] = 1.0;
      s.lp.set_bounds(s.edge_var[e], 1.0, 1.0);
    }
    s.pair_fixed[p] = 1;
    ++fixed;
  }
  return fixed;
}

DualSolution extract_duals(const RmpState& s, const lp::LpSolution& solution) {
  DualSolution d;
  const std::size_t k = s.pairs.size();
  d.sigma.resize(k);
  d.pi.resize(k);
  for (std::size_t p = 0; p < k; ++p) {
    d.sigma[p] = std::max(0.0, solution.dual[s.pair_row[p]]);
    for (const auto& [e, row] : s.edge_rows[p]) {
      const double pi = -solution.dual[row];
      if (pi > kDualZero) d.pi[p].emplace_back(e, pi);
    }
    std::sort(d.pi[p].begin(), d.pi[p].end());
  }
  return d;
}

std::size_t price_all(RmpState& s, const DualSolution& duals, PricingCache& cache, const PbConfig& config,
                      std::span<const EdgeId> local_zero, SolveStats& stats) {
  std::size_t added = 0;
  cache.resize(s.pairs.size());
  for (std::size_t p = 0; p < s.pairs.size(); ++p) {
    if (s.pair_fixed[p]) continue;
    const double sigma = duals.sigma[p];
    if (sigma <= kPriceTol) continue;  // no path costs less than zero
    PricingProblem problem;
    problem.pair = s.pairs[p];
    problem.edge_cost.assign(s.graph.edge_count(), 0.0);
    for (const auto& [e, pi] : duals.pi[p]) problem.edge_cost[e] = pi;
    for (EdgeId e : local_zero) problem.edge_cost[e] = std::max(problem.edge_cost[e], sigma);
    problem.cost_cap = sigma - kPriceTol;
    problem.mu = config.pricer == PricerKind::kBasic ? 1 : config.mu;

    const bool pruned = config.prune && cache.check(p, problem) == CacheDecision::kPrune;
    if (pruned) {
      ++stats.pruned_calls;
      if (!config.force_pruned) continue;
    } else {
      ++stats.pricing_calls;
    }

    ParetoFront front;
    if (config.pricer == PricerKind::kBasic) {
      if (auto hit = basic_csp(s.graph, problem, &s.dist)) front.push_back(std::move(*hit));
    } else {
      front = bi_a_star_mu(s.graph, problem, &s.dist);
    }
    if (pruned) {
      if (!front.empty()) ++stats.pruned_violations;
      continue;
    }
    if (front.empty()) {
      if (config.prune) cache.store(p, problem);
      continue;
    }
    for (const FrontEntry& entry : front) {
      if (s.add_column(static_cast<int>(p), entry.path)) {
        ++added;
        ++stats.columns_generated;
        if (entry.cost == 0.0) ++stats.free_columns;
      } else {
        ++stats.duplicate_columns;
      }
    }
  }
  return added;
}

RootResult solve_root(RmpState& s, const PbConfig& config, SolveStats& stats) {
  PricingCache cache(s.pairs.size());
  const Deadline deadline(config.time_limit);
  CgResult cg = column_generation(s, config, {}, cache, stats, deadline);
  RootResult r;
  r.converged = cg.outcome == CgOutcome::kOptimal;
  r.value = cg.value;
  r.duals = std::move(cg.duals);
  r.lp = std::move(cg.lp);
  if (r.converged) stats.root_lp = r.value;
  return r;
}

std::vector<PathColumn> check_dual_feasibility_exhaustive(const RmpState& s, const DualSolution& duals) {
  std::vector<PathColumn> violated;
  std::vector<double> cost(s.graph.edge_count(), 0.0);
  for (std::size_t p = 0; p < s.pairs.size(); ++p) {
    if (s.pair_fixed[p]) continue;
    for (const auto& [e, pi] : duals.pi[p]) cost[e] = pi;
    for (PathColumn& path : enumerate_all_bounded(s.graph, s.dist, s.pairs[p])) {
      double c = 0.0;
      for (EdgeId e : path.edges) c += cost[e];
      if (c < duals.sigma[p] - 1e-6) violated.push_back(std::move(path));
    }
    for (const auto& [e, pi] : duals.pi[p]) cost[e] = 0.0;
  }
  return violated;
}

SolveResult branch_and_price(const Graph& g, double alpha, const PbConfig& config) {
  const Deadline deadline(config.time_limit);
  SolveResult result;
  SolveStats& stats = result.stats;

  RmpState s = initialize_rmp(g, alpha, config);
  stats.setup_seconds = deadline.elapsed();
  if (config.fix_mandatory) stats.fixed_pairs = fix_mandatory(s);
  stats.fixed_edges = static_cast<std::size_t>(std::count(s.base_lo.begin(), s.base_lo.end(), 1.0));
  stats.fixing_seconds = deadline.elapsed() - stats.setup_seconds;
  stats.initial_columns = s.initial_columns;

  const DistanceMatrix original_dist = all_pairs_distances(g);
  const bool integral = s.graph.integral_weights();
  double incumbent = kInfinity;
  std::vector<EdgeId> incumbent_edges;
  if (s.incumbent) {
    incumbent = s.incumbent->total_weight;
    incumbent_edges = s.incumbent->edge_ids;
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::size_t next_id = 0;
  open.push(Node{{}, {}, nullptr, 0.0, 0, next_id++});
  PricingCache cache(s.pairs.size());
  bool limit_hit = false;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (bound_prunes(node.bound, incumbent, integral)) continue;
    if (deadline.expired() || stats.bb_nodes >= config.node_limit) {
      open.push(std::move(node));
      limit_hit = true;
      break;
    }
    ++stats.bb_nodes;

    bool conflict = false;
    for (EdgeId e = 0; e < s.graph.edge_count(); ++e) s.lp.set_bounds(s.edge_var[e], s.base_lo[e], s.base_hi[e]);
    for (EdgeId e : node.zero) {
      if (s.base_lo[e] > 0.0) conflict = true;
      s.lp.set_bounds(s.edge_var[e], 0.0, 0.0);
    }
    for (EdgeId e : node.one) s.lp.set_bounds(s.edge_var[e], 1.0, 1.0);
    if (conflict || !ensure_feasible(s, node.zero, stats)) continue;

    cache.clear();
    if (node.basis) s.lp.set_basis(*node.basis);
    CgResult cg = column_generation(s, config, node.zero, cache, stats, deadline);
    if (cg.outcome == CgOutcome::kLimit) {
      open.push(std::move(node));
      limit_hit = true;
      break;
    }
    if (cg.outcome == CgOutcome::kInfeasible) continue;
    if (node.id == 0) stats.root_lp = cg.value;
    const double z = std::max(cg.value, node.bound);
    if (bound_prunes(z, incumbent, integral)) continue;

    EdgeId branch = -1;
    double best_frac = 0.0;
    for (EdgeId e = 0; e < s.graph.edge_count(); ++e) {
      const double x = cg.lp.primal[s.edge_var[e]];
      const double frac = std::min(x, 1.0 - x);
      if (frac <= kIntegralityTol) continue;
      const bool better = branch < 0 || frac > best_frac + 1e-12 ||
                          (frac >= best_frac - 1e-12 && s.graph.weight(e) > s.graph.weight(branch));
      if (better) {
        branch = e;
        best_frac = frac;
      }
    }

    if (branch < 0) {
      std::vector<EdgeId> h;
      double weight = 0.0;
      for (EdgeId e = 0; e < s.graph.edge_count(); ++e)
        if (cg.lp.primal[s.edge_var[e]] >= 1.0 - kIntegralityTol) {
          h.push_back(e);
          weight += s.graph.weight(e);
        }
      if (!std::isfinite(incumbent) || weight < incumbent - 1e-9 * std::max(1.0, incumbent)) {
        incumbent = weight;
        incumbent_edges = std::move(h);
      }
      continue;
    }

    const auto basis = std::make_shared<const lp::Basis>(s.lp.basis());
    Node zero{node.zero, node.one, basis, z, node.depth + 1, next_id++};
    zero.zero.push_back(branch);
    Node one{node.zero, node.one, basis, z, node.depth + 1, next_id++};
    one.one.push_back(branch);
    open.push(std::move(zero));
    open.push(std::move(one));
  }

  if (std::isfinite(incumbent)) {
    std::vector<EdgeId> ids;
    for (EdgeId e : incumbent_edges) ids.push_back(s.original_id[e]);
    result.best = make_solution(g, std::move(ids));
    const VerifyResult check = verify_spanner(g, original_dist, alpha, result.best.edge_ids, PairMode::kAllPairs);
    if (!check.feasible) throw std::logic_error("incumbent is not an alpha-spanner");
    result.best.feasible_for_alpha = alpha;
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
  stats.wall_seconds = deadline.elapsed();
  return result;
}

}  // namespace spanner
