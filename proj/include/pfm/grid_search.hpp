#pragma once

// Exact nearest-neighbour search by uniform grid bucketing. The query cell
// is scanned first, then Chebyshev rings around it, until the distance from
// the query to the edge of the scanned square certifies the incumbent.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfm/kernels.hpp"
#include "pfm/pixel_grid.hpp"

namespace pfm {

/// Immutable after build; any number of threads may query concurrently.
class GridIndex {
 public:
  static GridIndex build(const UnitCloud& cloud, int resolution);

  int resolution() const { return resolution_; }
  std::size_t size() const { return ids_.size(); }
  std::size_t bucket_size(std::uint32_t i, std::uint32_t j) const;
  /// Ids stored in bucket (i, j), ascending.
  std::span<const PointId> bucket(std::uint32_t i, std::uint32_t j) const;
  /// Cell of a query point; coordinates outside [0,1] are clamped.
  Cell locate(double u, double v) const;

 private:
  friend struct GridScan;

  int resolution_ = 0;
  std::vector<std::uint32_t> offsets_;  // resolution^2 + 1, bucket-major by i
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<PointId> ids_;
};

struct NNResult {
  PointId id = 0;
  double distance = 0.0;
  std::uint32_t cells_examined = 0;
  std::uint64_t candidates_compared = 0;
};

/// Exact nearest neighbour of (u, v), lowest id on distance ties. exclude
/// removes one point from consideration.
NNResult nearest(const GridIndex& index, double u, double v,
                 std::optional<PointId> exclude = std::nullopt,
                 const kernels::KernelTable& table = kernels::best_table());

/// Linear-scan reference with the same tie rule.
NNResult nearest_bruteforce(const UnitCloud& cloud, double u, double v,
                            std::optional<PointId> exclude = std::nullopt);

/// round(sqrt(n / occupancy)), at least 1.
int resolution_for(std::size_t n, double occupancy);

enum class PointDistribution { uniform, skewed };

struct BenchConfig {
  std::vector<std::size_t> n_values;
  double occupancy = 4.0;
  std::size_t queries = 1000;
  std::uint64_t seed = 1;
  PointDistribution distribution = PointDistribution::uniform;
};

struct BenchRow {
  std::size_t n = 0;
  int resolution = 0;
  double mean_candidates = 0.0;
  double median_candidates = 0.0;
  double mean_cells = 0.0;
  double p99_cells = 0.0;
  double wall_time_us_mean = 0.0;
};

/// Deterministic point and query generation for one size of the benchmark.
std::vector<double> bench_points(std::size_t n, std::uint64_t seed, PointDistribution dist);

std::vector<BenchRow> bench_uniform(const BenchConfig& config,
                                    const kernels::KernelTable& table = kernels::best_table());

/// CSV with header n,G,mean_candidates,...; timing=false writes 0 for the
/// wall-clock column so the file depends only on the seed.
std::string bench_csv(const std::vector<BenchRow>& rows, bool timing = true);

}  // namespace pfm
