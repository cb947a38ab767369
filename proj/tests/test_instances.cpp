#include <filesystem>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "spanner/instances.hpp"

using namespace spanner;

TEST_CASE("complete family") {
  InstanceSpec spec;
  spec.family = Family::kComplete;
  spec.n = 5;
  spec.weight_model = WeightModel::kUnit;
  const Instance inst = generate(spec);
  CHECK(inst.graph.edge_count() == 10);
  for (const Edge& e : inst.graph.edges()) CHECK(e.weight == 1.0);
}

TEST_CASE("waxman with a huge beta and complete density is the complete graph") {
  InstanceSpec spec;
  spec.family = Family::kWaxman;
  spec.n = 12;
  spec.density_mode = DensityMode::kComplete;
  spec.waxman_beta = 1e15;
  spec.seed = 4;
  const Instance inst = generate(spec);
  CHECK(inst.waxman_gamma == 1.0);
  CHECK(inst.graph.edge_count() == 66);
}

TEST_CASE("erdos renyi edge count concentrates") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    InstanceSpec spec;
    spec.n = 100;
    spec.density_mode = DensityMode::kDegree;
    spec.density_value = 4;
    spec.weight_model = WeightModel::kUniformInt;
    spec.seed = seed;
    const Instance inst = generate(spec);
    CHECK(inst.graph.edge_count() >= 150);
    CHECK(inst.graph.edge_count() <= 250);
    CHECK(is_connected(inst.graph));
    for (const Edge& e : inst.graph.edges()) {
      CHECK(e.weight == std::floor(e.weight));
      CHECK(e.weight >= 1);
      CHECK(e.weight <= 100);
    }
  }
}

TEST_CASE("euclidean weights match coordinates") {
  InstanceSpec spec;
  spec.n = 15;
  spec.density_mode = DensityMode::kRelative;
  spec.density_value = 0.5;
  spec.weight_model = WeightModel::kEuclidean;
  spec.seed = 9;
  const Instance inst = generate(spec);
  for (const Edge& e : inst.graph.edges()) {
    const Point a = inst.coordinates[e.u], b = inst.coordinates[e.v];
    CHECK(e.weight == doctest::Approx(std::hypot(a.x - b.x, a.y - b.y)));
  }
}

TEST_CASE("generation is deterministic") {
  for (Family family : {Family::kErdosRenyi, Family::kWaxman}) {
    InstanceSpec spec;
    spec.family = family;
    spec.n = 30;
    spec.density_value = 5;
    spec.weight_model = WeightModel::kEuclidean;
    spec.seed = 1234567890123ULL;
    std::ostringstream a, b;
    write_edge_list(generate(spec).graph, a);
    write_edge_list(generate(spec).graph, b);
    CHECK(a.str() == b.str());
    spec.seed += 1;
    std::ostringstream c;
    write_edge_list(generate(spec).graph, c);
    CHECK(a.str() != c.str());
  }
}

TEST_CASE("waxman calibration hits the target density") {
  struct Case {
    int n;
    double degree;
  };
  for (Case c : {Case{60, 4}, Case{60, 6}, Case{100, 4}, Case{100, 6}, Case{100, 8}}) {
    double total = 0;
    const int seeds = 100;
    InstanceSpec spec;
    spec.family = Family::kWaxman;
    spec.n = c.n;
    spec.density_value = c.degree;
    for (int s = 0; s < seeds; ++s) {
      spec.seed = 1000 + s;
      const Instance inst = generate(spec);
      total += inst.graph.edge_count();
    }
    const double mean = total / seeds;
    CHECK(std::abs(mean - target_edge_count(spec)) <= 0.1 * target_edge_count(spec));
  }
}

TEST_CASE("waxman gamma saturates when the target is out of reach") {
  InstanceSpec spec;
  spec.family = Family::kWaxman;
  spec.n = 20;
  spec.density_value = 8;
  spec.seed = 3;
  const Instance inst = generate(spec);
  CHECK(inst.waxman_gamma == 1.0);
  CHECK(inst.graph.edge_count() < target_edge_count(spec));
}

TEST_CASE("invalid specs are rejected") {
  InstanceSpec spec;
  spec.n = 10;
  spec.density_mode = DensityMode::kRelative;
  spec.density_value = 1.5;
  CHECK_THROWS_AS(generate(spec), InstanceError);
  spec.density_mode = DensityMode::kDegree;
  spec.density_value = 9;
  CHECK_THROWS_AS(generate(spec), InstanceError);
  spec.n = 200;
  spec.density_value = 0.05;
  CHECK_THROWS_WITH_AS(generate(spec), doctest::Contains("attempts"), InstanceError);
}

TEST_CASE("c4 witness") {
  const Instance c4 = make_c4_witness();
  CHECK(c4.graph.node_count() == 4);
  CHECK(c4.graph.edge_count() == 4);
  for (NodeId v = 0; v < 4; ++v) CHECK(c4.graph.degree(v) == 2);
  for (const Edge& e : c4.graph.edges()) CHECK(e.weight == 1.0);
  CHECK(all_pairs_distances(c4.graph)(0, 2) == 2);
}

TEST_CASE("k5 subdivision witness") {
  const Instance k5 = make_k5_subdivision_witness();
  const Graph& g = k5.graph;
  CHECK(g.node_count() == 10);
  CHECK(g.edge_count() == 15);
  for (NodeId v = 0; v < 5; ++v) CHECK(g.degree(v) == 4);
  for (NodeId v = 5; v < 10; ++v) CHECK(g.degree(v) == 2);
  const auto d = all_pairs_distances(g);
  // chords join originals two steps apart on the cycle, i.e. cycle distance 4
  std::vector<Edge> cycle_only;
  for (const Edge& e : g.edges())
    if (e.u >= 5 || e.v >= 5) cycle_only.push_back(e);
  const Graph cycle(10, cycle_only);
  CHECK(cycle.edge_count() == 10);
  const auto dc = all_pairs_distances(cycle);
  for (const Edge& e : g.edges()) {
    if (e.u < 5 && e.v < 5) CHECK(dc(e.u, e.v) == 4);
    CHECK(d(e.u, e.v) == 1);
  }
}

TEST_CASE("edge list round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "spanner_instances_test";
  std::filesystem::create_directories(dir);
  InstanceSpec spec;
  spec.n = 20;
  spec.density_value = 4;
  spec.weight_model = WeightModel::kEuclidean;
  spec.seed = 77;
  const Instance inst = generate(spec);
  const auto path = dir / "er.txt";
  write_instance(inst, path);
  const Instance back = read_instance(path);
  REQUIRE(back.graph.edge_count() == inst.graph.edge_count());
  for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
    CHECK(back.graph.edge(e).u == inst.graph.edge(e).u);
    CHECK(back.graph.edge(e).v == inst.graph.edge(e).v);
    CHECK(back.graph.edge(e).weight == inst.graph.edge(e).weight);
  }
  auto sidecar = path;
  sidecar += ".json";
  REQUIRE(std::filesystem::exists(sidecar));
  const auto meta = nlohmann::json::parse(instance_metadata_json(inst));
  CHECK(meta["seed"] == 77);
  CHECK(meta["n"] == 20);
  std::filesystem::remove_all(dir);
}

TEST_CASE("edge list errors carry line numbers") {
  std::istringstream bad("3 2\n0 1 1\n1 x 1\n");
  CHECK_THROWS_WITH(parse_edge_list(bad), doctest::Contains("line 3"));
  std::istringstream short_list("3 2\n0 1 1\n");
  CHECK_THROWS(parse_edge_list(short_list));
}

TEST_CASE("stp reader") {
  std::istringstream in(
      "33D32945 STP File, STP Format Version 1.0\n"
      "SECTION Comment\nName \"tiny\"\nEND\n\n"
      "SECTION Graph\nNodes 3\nEdges 2\nE 1 2 3\nE 2 3 1\nEND\n\n"
      "SECTION Terminals\nTerminals 2\nT 1\nT 3\nEND\n\nEOF\n");
  const Graph g = parse_stp(in);
  CHECK(g.node_count() == 3);
  REQUIRE(g.edge_count() == 2);
  CHECK(g.edge(0).u == 0);
  CHECK(g.edge(0).v == 1);
  CHECK(g.edge(0).weight == 3);

  std::istringstream empty("SECTION Graph\nNodes 3\nEdges 0\nEND\nEOF\n");
  CHECK_THROWS(parse_stp(empty));
}
