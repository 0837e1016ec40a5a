#pragma once

// Pixellation of a factor plane: rescale a coordinate pair into the unit
// square, hash every point to a grid cell and keep the per-cell frequency
// of occurrence together with the member lists.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pfm {

/// Index of a point in its cloud. Ties anywhere in the library resolve
/// towards the lower PointId.
using PointId = std::uint32_t;

struct RescaleParams {
  double min = 0.0;
  double max = 1.0;

  bool degenerate() const { return !(max > min); }
  double apply(double value) const;
};

struct UnitCloud {
  std::vector<std::string> labels;
  std::vector<double> x;
  std::vector<double> y;
  std::pair<int, int> axis_pair{1, 2};  // 1-based factor indices
  RescaleParams rescale_x;
  RescaleParams rescale_y;

  std::size_t size() const { return x.size(); }
};

/// Affine per-axis map x -> (x - min) / (max - min). The maximum lands on
/// exactly 1.0; a degenerate axis maps every point to 0.0.
UnitCloud rescale_unit(std::span<const double> fx, std::span<const double> fy,
                       std::vector<std::string> labels, std::pair<int, int> axis_pair = {1, 2});

/// Wraps coordinates already in [0,1]^2 (identity rescale). Labels default
/// to the decimal point index.
UnitCloud make_unit_cloud(std::vector<double> x, std::vector<double> y,
                          std::vector<std::string> labels = {});

struct Cell {
  std::uint32_t i = 0;  // bin along the first factor of the pair
  std::uint32_t j = 0;  // bin along the second

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// 0, 1/g, ..., 1 with each interior value computed as k/g.
std::vector<double> uniform_boundaries(int g);

/// Strictly increasing, first 0, last 1, at least two bins.
void validate_boundaries(std::span<const double> boundaries);

/// Bin containing u: boundary_lo <= u < boundary_hi, with u == 1 in the top bin.
std::uint32_t assign_bin(double u, std::span<const double> boundaries);

/// Throws for coordinates outside [0,1].
Cell assign_cell(double u, double v, std::span<const double> bx, std::span<const double> by);
Cell assign_cell(double u, double v, int g);

/// Bin of every value in us (each in [0,1]) under the given boundaries.
std::vector<std::uint32_t> assign_bins(std::span<const double> us,
                                       std::span<const double> boundaries);

struct GridHistogram {
  int base = 0;
  std::vector<double> boundaries_x;
  std::vector<double> boundaries_y;
  std::vector<std::uint64_t> counts;            // row-major by i: counts[i * base + j]
  std::vector<std::vector<PointId>> members;    // same layout, ascending ids

  std::uint64_t count(std::uint32_t i, std::uint32_t j) const { return counts[i * base + j]; }
  const std::vector<PointId>& members_of(std::uint32_t i, std::uint32_t j) const {
    return members[i * base + j];
  }
  std::uint64_t total() const;
  /// Per-bin totals along the first (axis 0) or second (axis 1) factor.
  std::vector<std::uint64_t> marginal(int axis) const;
};

GridHistogram build_histogram(const UnitCloud& cloud, int g);
GridHistogram build_histogram(const UnitCloud& cloud, std::vector<double> boundaries_x,
                              std::vector<double> boundaries_y);

struct DuplicateGroup {
  double x = 0.0;
  double y = 0.0;
  std::vector<PointId> members;  // ascending
};

struct OverlapReport {
  Cell max_cell;
  std::uint64_t max_count = 0;
  std::vector<DuplicateGroup> duplicate_groups;  // ordered by first member

  std::size_t redundant_points() const;
};

/// Most populated cell (lowest (i,j) on ties) and the groups of points whose
/// rescaled coordinates are bit-identical.
OverlapReport overlap_report(const UnitCloud& cloud, const GridHistogram& hist);

}  // namespace pfm
