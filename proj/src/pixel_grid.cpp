#include "pfm/pixel_grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "pfm/error.hpp"
#include "pfm/kernels.hpp"

namespace pfm {

namespace {

RescaleParams extent(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

std::vector<double> rescale_axis(std::span<const double> values, const RescaleParams& p) {
  std::vector<double> out(values.size(), 0.0);
  if (!p.degenerate()) kernels::rescale(values, p.min, p.max - p.min, out);
  return out;
}

void require_unit(double u, const char* axis) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw Error(Errc::out_of_range,
                std::string("coordinate ") + axis + " = " + std::to_string(u) + " outside [0,1]");
  }
}

}  // namespace

double RescaleParams::apply(double value) const {
  return degenerate() ? 0.0 : (value - min) / (max - min);
}

UnitCloud rescale_unit(std::span<const double> fx, std::span<const double> fy,
                       std::vector<std::string> labels, std::pair<int, int> axis_pair) {
  if (fx.empty()) throw Error(Errc::empty_input, "cannot rescale an empty point cloud");
  if (fx.size() != fy.size()) throw Error(Errc::invalid_argument, "coordinate length mismatch");
  for (std::size_t i = 0; i < fx.size(); ++i) {
    if (!std::isfinite(fx[i]) || !std::isfinite(fy[i])) {
      throw Error(Errc::non_numeric, "non-finite factor coordinate at point " + std::to_string(i));
    }
  }
  UnitCloud cloud;
  cloud.axis_pair = axis_pair;
  cloud.rescale_x = extent(fx);
  cloud.rescale_y = extent(fy);
  cloud.x = rescale_axis(fx, cloud.rescale_x);
  cloud.y = rescale_axis(fy, cloud.rescale_y);
  if (labels.empty()) {
    for (std::size_t i = 0; i < fx.size(); ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != fx.size()) throw Error(Errc::invalid_argument, "label count mismatch");
  cloud.labels = std::move(labels);
  return cloud;
}

UnitCloud make_unit_cloud(std::vector<double> x, std::vector<double> y,
                          std::vector<std::string> labels) {
  if (x.empty()) throw Error(Errc::empty_input, "empty point cloud");
  if (x.size() != y.size()) throw Error(Errc::invalid_argument, "coordinate length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    require_unit(x[i], "x");
    require_unit(y[i], "y");
  }
  if (labels.empty()) {
    for (std::size_t i = 0; i < x.size(); ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != x.size()) throw Error(Errc::invalid_argument, "label count mismatch");
  UnitCloud cloud;
  cloud.x = std::move(x);
  cloud.y = std::move(y);
  cloud.labels = std::move(labels);
  return cloud;
}

std::vector<double> uniform_boundaries(int g) {
  if (g < 1) throw Error(Errc::out_of_range, "grid base must be positive");
  std::vector<double> b(g + 1);
  for (int k = 0; k <= g; ++k) b[k] = static_cast<double>(k) / static_cast<double>(g);
  return b;
}

void validate_boundaries(std::span<const double> boundaries) {
  if (boundaries.size() < 2) throw Error(Errc::invalid_argument, "boundaries need at least one bin");
  if (boundaries.front() != 0.0 || boundaries.back() != 1.0) {
    throw Error(Errc::invalid_argument, "boundaries must start at 0 and end at 1");
  }
  for (std::size_t k = 1; k < boundaries.size(); ++k) {
    if (!(boundaries[k] > boundaries[k - 1])) {
      throw Error(Errc::invalid_argument, "boundaries must be strictly increasing");
    }
  }
}

std::uint32_t assign_bin(double u, std::span<const double> boundaries) {
  std::uint32_t bin = 0;
  kernels::scalar_table().bin_index(&u, 1, boundaries.data() + 1, boundaries.size() - 2, &bin);
  return bin;
}

Cell assign_cell(double u, double v, std::span<const double> bx, std::span<const double> by) {
  require_unit(u, "u");
  require_unit(v, "v");
  validate_boundaries(bx);
  validate_boundaries(by);
  return {assign_bin(u, bx), assign_bin(v, by)};
}

Cell assign_cell(double u, double v, int g) {
  if (g < 1) throw Error(Errc::out_of_range, "grid base must be positive");
  const auto b = uniform_boundaries(g);
  return assign_cell(u, v, b, b);
}

std::vector<std::uint32_t> assign_bins(std::span<const double> us,
                                       std::span<const double> boundaries) {
  std::vector<std::uint32_t> out(us.size());
  kernels::bin_index(us, boundaries.subspan(1, boundaries.size() - 2), out);
  return out;
}

std::uint64_t GridHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<std::uint64_t> GridHistogram::marginal(int axis) const {
  std::vector<std::uint64_t> out(base, 0);
  for (int i = 0; i < base; ++i) {
    for (int j = 0; j < base; ++j) out[axis == 0 ? i : j] += counts[i * base + j];
  }
  return out;
}

GridHistogram build_histogram(const UnitCloud& cloud, int g) {
  if (g < 2) throw Error(Errc::out_of_range, "histogram base must be at least 2");
  return build_histogram(cloud, uniform_boundaries(g), uniform_boundaries(g));
}

GridHistogram build_histogram(const UnitCloud& cloud, std::vector<double> boundaries_x,
                              std::vector<double> boundaries_y) {
  validate_boundaries(boundaries_x);
  validate_boundaries(boundaries_y);
  if (boundaries_x.size() != boundaries_y.size()) {
    throw Error(Errc::invalid_argument, "both axes need the same number of bins");
  }
  if (cloud.size() == 0) throw Error(Errc::empty_input, "empty point cloud");
  for (std::size_t p = 0; p < cloud.size(); ++p) {
    require_unit(cloud.x[p], "x");
    require_unit(cloud.y[p], "y");
  }
  GridHistogram hist;
  hist.base = static_cast<int>(boundaries_x.size()) - 1;
  const auto bins_x = assign_bins(cloud.x, boundaries_x);
  const auto bins_y = assign_bins(cloud.y, boundaries_y);
  hist.boundaries_x = std::move(boundaries_x);
  hist.boundaries_y = std::move(boundaries_y);
  const std::size_t cells = static_cast<std::size_t>(hist.base) * hist.base;
  hist.counts.assign(cells, 0);
  hist.members.assign(cells, {});
  for (std::size_t p = 0; p < cloud.size(); ++p) {
    const std::size_t cell = static_cast<std::size_t>(bins_x[p]) * hist.base + bins_y[p];
    ++hist.counts[cell];
    hist.members[cell].push_back(static_cast<PointId>(p));
  }
  return hist;
}

std::size_t OverlapReport::redundant_points() const {
  std::size_t n = 0;
  for (const auto& g : duplicate_groups) n += g.members.size() - 1;
  return n;
}

OverlapReport overlap_report(const UnitCloud& cloud, const GridHistogram& hist) {
  if (hist.total() != cloud.size()) {
    throw Error(Errc::invalid_argument, "histogram was not built from this cloud");
  }
  OverlapReport report;
  for (int i = 0; i < hist.base; ++i) {
    for (int j = 0; j < hist.base; ++j) {
      const auto c = hist.count(i, j);
      if (c > report.max_count) {
        report.max_count = c;
        report.max_cell = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
      }
    }
  }

  std::vector<PointId> order(cloud.size());
  std::iota(order.begin(), order.end(), PointId{0});
  auto key = [&](PointId p) {
    return std::pair{std::bit_cast<std::uint64_t>(cloud.x[p]),
                     std::bit_cast<std::uint64_t>(cloud.y[p])};
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](PointId a, PointId b) { return key(a) < key(b); });
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo + 1;
    while (hi < order.size() && key(order[hi]) == key(order[lo])) ++hi;
    if (hi - lo > 1) {
      DuplicateGroup g;
      g.x = cloud.x[order[lo]];
      g.y = cloud.y[order[lo]];
      g.members.assign(order.begin() + lo, order.begin() + hi);
      report.duplicate_groups.push_back(std::move(g));
    }
    lo = hi;
  }
  std::sort(report.duplicate_groups.begin(), report.duplicate_groups.end(),
            [](const DuplicateGroup& a, const DuplicateGroup& b) {
              return a.members.front() < b.members.front();
            });
  return report;
}

}  // namespace pfm
