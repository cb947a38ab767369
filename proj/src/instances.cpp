#include "spanner/instances.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace spanner {

namespace {

class Sampler {
 public:
  Sampler(std::uint64_t seed, int attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt)};
    rng_.seed(seq);
  }

  // 53 random mantissa bits, identical on every platform.
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t draw;
    do {
      draw = rng_();
    } while (draw >= limit);
    return lo + static_cast<int>(draw % span);
  }

 private:
  std::mt19937_64 rng_;
};

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void validate(const InstanceSpec& spec) {
  if (spec.n < 2) throw InstanceError("instance needs at least 2 nodes");
  if (spec.family == Family::kFixture) throw InstanceError("fixtures are built by their own constructors");
  if (spec.family == Family::kComplete) return;
  switch (spec.density_mode) {
    case DensityMode::kRelative:
      if (!(spec.density_value > 0.0 && spec.density_value <= 1.0))
        throw InstanceError("relative density must lie in (0, 1]");
      break;
    case DensityMode::kDegree:
      if (!(spec.density_value > 0.0 && spec.density_value < spec.n - 1))
        throw InstanceError("average degree must lie in (0, n-1)");
      break;
    case DensityMode::kComplete:
      break;
  }
  if (spec.family == Family::kWaxman && !(spec.waxman_beta > 0.0)) throw InstanceError("waxman beta must be positive");
}

std::optional<Instance> sample(const InstanceSpec& spec, int attempt) {
  Sampler rng(spec.seed, attempt);
  const int n = spec.n;
  Instance inst;
  inst.coordinates.resize(n);
  for (Point& p : inst.coordinates) {
    p.x = rng.uniform();
    p.y = rng.uniform();
  }

  std::vector<std::pair<NodeId, NodeId>> chosen;
  if (spec.family == Family::kComplete ||
      (spec.family == Family::kErdosRenyi && spec.density_mode == DensityMode::kComplete)) {
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) chosen.emplace_back(u, v);
  } else if (spec.family == Family::kErdosRenyi) {
    const double p = spec.density_mode == DensityMode::kRelative ? spec.density_value : spec.density_value / (n - 1);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (rng.uniform() < p) chosen.emplace_back(u, v);
  } else {
    double longest = 0.0;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) longest = std::max(longest, distance(inst.coordinates[u], inst.coordinates[v]));
    const double gamma = calibrate_waxman_gamma(inst.coordinates, spec.waxman_beta, target_edge_count(spec));
    inst.waxman_gamma = gamma;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) {
        const double d = distance(inst.coordinates[u], inst.coordinates[v]);
        if (rng.uniform() < gamma * std::exp(-d / (spec.waxman_beta * longest))) chosen.emplace_back(u, v);
      }
  }

  std::vector<Edge> edges;
  edges.reserve(chosen.size());
  for (auto [u, v] : chosen) {
    double w = 1.0;
    if (spec.weight_model == WeightModel::kEuclidean) {
      w = distance(inst.coordinates[u], inst.coordinates[v]);
      if (!(w > 0.0)) return std::nullopt;  // coincident points
    } else if (spec.weight_model == WeightModel::kUniformInt) {
      w = rng.uniform_int(1, n);
    }
    edges.push_back({u, v, w});
  }
  inst.graph = Graph(n, std::move(edges));
  if (!is_connected(inst.graph)) return std::nullopt;
  return inst;
}

}  // namespace

double target_edge_count(const InstanceSpec& spec) {
  const double pairs = 0.5 * spec.n * (spec.n - 1.0);
  if (spec.family == Family::kComplete) return pairs;
  switch (spec.density_mode) {
    case DensityMode::kRelative:
      return spec.density_value * pairs;
    case DensityMode::kDegree:
      return 0.5 * spec.n * spec.density_value;
    case DensityMode::kComplete:
      return pairs;
  }
  return pairs;
}

double calibrate_waxman_gamma(std::span<const Point> points, double beta, double target_edges) {
  double longest = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) longest = std::max(longest, distance(points[i], points[j]));
  if (longest == 0.0) return 1.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) mass += std::exp(-distance(points[i], points[j]) / (beta * longest));
  const double gamma = target_edges / mass;
  return std::clamp(gamma, std::numeric_limits<double>::min(), 1.0);
}

Instance generate(const InstanceSpec& spec) {
  validate(spec);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    if (auto inst = sample(spec, attempt)) {
      inst->spec = spec;
      inst->resample_count = attempt;
      inst->source = to_string(spec.family) + "-n" + std::to_string(spec.n) + "-s" + std::to_string(spec.seed);
      return std::move(*inst);
    }
  }
  std::ostringstream msg;
  msg << "no connected sample after " << kMaxResamples << " attempts (family " << to_string(spec.family)
      << ", n " << spec.n << ", expected edges " << target_edge_count(spec) << ", spanning tree needs "
      << spec.n - 1 << ")";
  throw InstanceError(msg.str());
}

Instance make_c4_witness() {
  Instance inst;
  inst.graph = Graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  inst.source = "c4-witness";
  return inst;
}

Instance make_k5_subdivision_witness() {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < 5; ++i) {
    const NodeId mid = 5 + i;
    edges.push_back({i, mid, 1});
    edges.push_back({mid, (i + 1) % 5, 1});
  }
  for (NodeId i = 0; i < 5; ++i) edges.push_back({i, (i + 2) % 5, 1});
  Instance inst;
  inst.graph = Graph(10, std::move(edges));
  inst.source = "k5-subdivision-witness";
  return inst;
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << format_double(e.weight) << '\n';
}

namespace {

[[noreturn]] void fail_at(int line, const std::string& what) {
  throw InstanceError("line " + std::to_string(line) + ": " + what);
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

Graph parse_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  long n = -1, m = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line) || line[0] == '#') continue;
    std::istringstream header(line);
    std::string rest;
    if (!(header >> n >> m) || (header >> rest) || n < 0 || m < 0) fail_at(line_no, "expected header 'n m'");
    break;
  }
  if (n < 0) throw InstanceError("missing header 'n m'");
  std::vector<Edge> edges;
  while (static_cast<long>(edges.size()) < m && std::getline(in, line)) {
    ++line_no;
    if (blank(line) || line[0] == '#') continue;
    std::istringstream row(line);
    Edge e;
    std::string rest;
    if (!(row >> e.u >> e.v >> e.weight) || (row >> rest)) fail_at(line_no, "expected 'u v w'");
    edges.push_back(e);
  }
  if (static_cast<long>(edges.size()) != m)
    throw InstanceError("expected " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  try {
    return Graph(static_cast<int>(n), std::move(edges));
  } catch (const GraphError& err) {
    throw InstanceError(err.what());
  }
}

Graph parse_stp(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool in_graph = false;
  long nodes = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::string key;
    if (!(row >> key)) continue;
    std::string upper = key;
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper == "SECTION") {
      std::string name;
      row >> name;
      for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      in_graph = name == "graph";
      continue;
    }
    if (upper == "END") {
      in_graph = false;
      continue;
    }
    if (!in_graph) continue;
    if (upper == "NODES") {
      if (!(row >> nodes) || nodes < 0) fail_at(line_no, "malformed Nodes line");
    } else if (upper == "E") {
      long u, v;
      double w;
      if (!(row >> u >> v >> w)) fail_at(line_no, "malformed edge line");
      if (u < 1 || v < 1) fail_at(line_no, "STP node ids are 1-based");
      edges.push_back({static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1), w});
    }
  }
  if (edges.empty()) throw InstanceError("STP graph section has no edges");
  if (nodes < 0) {
    for (const Edge& e : edges) nodes = std::max<long>(nodes, std::max(e.u, e.v) + 1);
  }
  try {
    return Graph(static_cast<int>(nodes), std::move(edges));
  } catch (const GraphError& err) {
    throw InstanceError(err.what());
  }
}

Instance read_instance(const std::filesystem::path& path, FileFormat format) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open " + path.string());
  Instance inst;
  inst.graph = format == FileFormat::kStp ? parse_stp(in) : parse_edge_list(in);
  inst.source = path.string();
  return inst;
}

void write_instance(const Instance& instance, const std::filesystem::path& path, FileFormat format) {
  if (format != FileFormat::kEdgeList) throw InstanceError("only the edge_list format can be written");
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot write " + path.string());
  write_edge_list(instance.graph, out);
  if (instance.spec) {
    std::ofstream meta(path.string() + ".json");
    meta << instance_metadata_json(instance) << '\n';
  }
}

std::string instance_metadata_json(const Instance& instance) {
  nlohmann::ordered_json j;
  j["source"] = instance.source;
  j["nodes"] = instance.graph.node_count();
  j["edges"] = instance.graph.edge_count();
  if (instance.spec) {
    const InstanceSpec& s = *instance.spec;
    j["family"] = to_string(s.family);
    j["n"] = s.n;
    j["density_mode"] = to_string(s.density_mode);
    j["density_value"] = s.density_value;
    j["weight_model"] = to_string(s.weight_model);
    j["seed"] = s.seed;
    j["waxman_beta"] = s.waxman_beta;
    if (s.family == Family::kWaxman) j["waxman_gamma"] = instance.waxman_gamma;
  }
  j["resample_count"] = instance.resample_count;
  return j.dump();
}

std::string to_string(Family f) {
  switch (f) {
    case Family::kErdosRenyi: return "ER";
    case Family::kWaxman: return "WM";
    case Family::kComplete: return "CMP";
    case Family::kFixture: return "fixture";
  }
  return "?";
}

std::string to_string(DensityMode d) {
  switch (d) {
    case DensityMode::kRelative: return "relative";
    case DensityMode::kDegree: return "degree";
    case DensityMode::kComplete: return "complete";
  }
  return "?";
}

std::string to_string(WeightModel w) {
  switch (w) {
    case WeightModel::kUnit: return "w1";
    case WeightModel::kEuclidean: return "euc";
    case WeightModel::kUniformInt: return "wn";
  }
  return "?";
}

Family parse_family(const std::string& text) {
  if (text == "ER" || text == "er") return Family::kErdosRenyi;
  if (text == "WM" || text == "wm") return Family::kWaxman;
  if (text == "CMP" || text == "cmp") return Family::kComplete;
  throw std::invalid_argument("unknown family: " + text);
}

DensityMode parse_density_mode(const std::string& text) {
  if (text == "relative") return DensityMode::kRelative;
  if (text == "degree") return DensityMode::kDegree;
  if (text == "complete") return DensityMode::kComplete;
  throw std::invalid_argument("unknown density mode: " + text);
}

WeightModel parse_weight_model(const std::string& text) {
  if (text == "w1") return WeightModel::kUnit;
  if (text == "euc") return WeightModel::kEuclidean;
  if (text == "wn") return WeightModel::kUniformInt;
  throw std::invalid_argument("unknown weight model: " + text);
}

FileFormat parse_file_format(const std::string& text) {
  if (text == "edge_list" || text == "edges") return FileFormat::kEdgeList;
  if (text == "stp") return FileFormat::kStp;
  throw std::invalid_argument("unknown file format: " + text);
}

}  // namespace spanner
