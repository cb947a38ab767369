#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spanner/graph.hpp"

namespace spanner {

enum class Family { kErdosRenyi, kWaxman, kComplete, kFixture };
enum class DensityMode { kRelative, kDegree, kComplete };
enum class WeightModel { kUnit, kEuclidean, kUniformInt };

struct InstanceSpec {
  Family family = Family::kErdosRenyi;
  int n = 0;
  DensityMode density_mode = DensityMode::kDegree;
  double density_value = 4.0;  // relative density or average degree
  WeightModel weight_model = WeightModel::kUnit;
  std::uint64_t seed = 0;
  double waxman_beta = 0.14;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Instance {
  Graph graph;
  std::vector<Point> coordinates;  // empty when unknown
  std::optional<InstanceSpec> spec;
  std::string source;  // file path or fixture name
  int resample_count = 0;
  double waxman_gamma = 0.0;  // calibrated value, Waxman only
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxResamples = 1000;

/// Samples a connected instance. Disconnected draws are retried with the
/// next sub-seed, at most kMaxResamples times.
Instance generate(const InstanceSpec& spec);

/// Expected edge count of `spec` (n * delta / 2, rho * n(n-1)/2, or complete).
double target_edge_count(const InstanceSpec& spec);

/// Waxman scale gamma hitting the target expected edge count, clamped to (0, 1].
double calibrate_waxman_gamma(std::span<const Point> points, double beta, double target_edges);

/// Unit-weight 4-cycle 0-1-2-3-0.
Instance make_c4_witness();

/// K5 with the Hamilton cycle 0-1-2-3-4-0 subdivided once per edge (nodes
/// 5..9) plus the five remaining chords; unit weights.
Instance make_k5_subdivision_witness();

enum class FileFormat { kEdgeList, kStp };

Instance read_instance(const std::filesystem::path& path, FileFormat format = FileFormat::kEdgeList);
void write_instance(const Instance& instance, const std::filesystem::path& path,
                    FileFormat format = FileFormat::kEdgeList);

Graph parse_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);
Graph parse_stp(std::istream& in);

/// JSON sidecar text: spec fields, seed and resampling count.
std::string instance_metadata_json(const Instance& instance);

std::string to_string(Family f);
std::string to_string(DensityMode d);
std::string to_string(WeightModel w);
Family parse_family(const std::string& text);
DensityMode parse_density_mode(const std::string& text);
WeightModel parse_weight_model(const std::string& text);
FileFormat parse_file_format(const std::string& text);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace spanner
