#include "pfm/grid_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "pfm/error.hpp"
#include "pfm/format.hpp"

namespace pfm {

namespace {

std::size_t candidate_count(std::size_t n, std::optional<PointId> exclude) {
  return n - (exclude && *exclude < n ? 1 : 0);
}

std::uint32_t exclude_sentinel(std::optional<PointId> exclude) {
  return exclude ? *exclude : kernels::kNoId;
}

void require_finite_query(double u, double v) {
  if (!std::isfinite(u) || !std::isfinite(v)) {
    throw Error(Errc::non_numeric, "query coordinates must be finite");
  }
}

}  // namespace

GridIndex GridIndex::build(const UnitCloud& cloud, int resolution) {
  if (resolution < 1) throw Error(Errc::out_of_range, "index resolution must be at least 1");
  if (cloud.size() == 0) throw Error(Errc::empty_input, "cannot index an empty cloud");
  if (cloud.size() >= kernels::kNoId) throw Error(Errc::out_of_range, "too many points");
  for (std::size_t p = 0; p < cloud.size(); ++p) {
    if (!(cloud.x[p] >= 0.0 && cloud.x[p] <= 1.0 && cloud.y[p] >= 0.0 && cloud.y[p] <= 1.0)) {
      throw Error(Errc::out_of_range, "cloud point " + std::to_string(p) + " outside [0,1]^2");
    }
  }

  const std::size_t n = cloud.size();
  const auto g = static_cast<std::uint32_t>(resolution);
  std::vector<std::uint32_t> bi(n), bj(n);
  kernels::uniform_bin_index(cloud.x, g, bi);
  kernels::uniform_bin_index(cloud.y, g, bj);

  GridIndex index;
  index.resolution_ = resolution;
  const std::size_t cells = static_cast<std::size_t>(g) * g;
  index.offsets_.assign(cells + 1, 0);
  for (std::size_t p = 0; p < n; ++p) ++index.offsets_[bi[p] * g + bj[p] + 1];
  for (std::size_t c = 0; c < cells; ++c) index.offsets_[c + 1] += index.offsets_[c];

  index.xs_.resize(n);
  index.ys_.resize(n);
  index.ids_.resize(n);
  std::vector<std::uint32_t> cursor(index.offsets_.begin(), index.offsets_.end() - 1);
  for (std::size_t p = 0; p < n; ++p) {
    const auto slot = cursor[bi[p] * g + bj[p]]++;
    index.xs_[slot] = cloud.x[p];
    index.ys_[slot] = cloud.y[p];
    index.ids_[slot] = static_cast<PointId>(p);
  }
  return index;
}

std::size_t GridIndex::bucket_size(std::uint32_t i, std::uint32_t j) const {
  return bucket(i, j).size();
}

std::span<const PointId> GridIndex::bucket(std::uint32_t i, std::uint32_t j) const {
  const auto g = static_cast<std::uint32_t>(resolution_);
  if (i >= g || j >= g) throw Error(Errc::out_of_range, "bucket outside grid");
  const auto c = static_cast<std::size_t>(i) * g + j;
  return std::span<const PointId>(ids_).subspan(offsets_[c], offsets_[c + 1] - offsets_[c]);
}

Cell GridIndex::locate(double u, double v) const {
  const double cu = std::clamp(u, 0.0, 1.0);
  const double cv = std::clamp(v, 0.0, 1.0);
  Cell cell;
  const auto g = static_cast<std::uint32_t>(resolution_);
  kernels::scalar_table().uniform_bin_index(&cu, 1, g, &cell.i);
  kernels::scalar_table().uniform_bin_index(&cv, 1, g, &cell.j);
  return cell;
}

struct GridScan {
  const GridIndex& index;
  const kernels::KernelTable& table;
  double u;
  double v;
  std::uint32_t exclude;
  kernels::ScanState state;
  std::uint32_t cells = 0;

  void visit(long i, long j) {
    const long g = index.resolution_;
    if (i < 0 || j < 0 || i >= g || j >= g) return;
    ++cells;
    const auto c = static_cast<std::size_t>(i) * static_cast<std::size_t>(g) +
                   static_cast<std::size_t>(j);
    const auto lo = index.offsets_[c];
    const auto count = index.offsets_[c + 1] - lo;
    if (count == 0) return;
    table.nearest_scan(index.xs_.data() + lo, index.ys_.data() + lo, index.ids_.data() + lo,
                       count, u, v, exclude, &state);
  }

  void ring(long ci, long cj, long r) {
    if (r == 0) {
      visit(ci, cj);
      return;
    }
    for (long j = cj - r; j <= cj + r; ++j) {
      visit(ci - r, j);
      visit(ci + r, j);
    }
    for (long i = ci - r + 1; i <= ci + r - 1; ++i) {
      visit(i, cj - r);
      visit(i, cj + r);
    }
  }

  // Smallest distance from the query to the scanned square's sides that are
  // not on the unit-square edge; infinity once the whole grid is covered.
  double margin(long ci, long cj, long r) const {
    const long g = index.resolution_;
    const double gd = static_cast<double>(g);
    double m = std::numeric_limits<double>::infinity();
    if (ci - r > 0) m = std::min(m, u - static_cast<double>(ci - r) / gd);
    if (ci + r + 1 < g) m = std::min(m, static_cast<double>(ci + r + 1) / gd - u);
    if (cj - r > 0) m = std::min(m, v - static_cast<double>(cj - r) / gd);
    if (cj + r + 1 < g) m = std::min(m, static_cast<double>(cj + r + 1) / gd - v);
    return m;
  }
};

NNResult nearest(const GridIndex& index, double u, double v, std::optional<PointId> exclude,
                 const kernels::KernelTable& table) {
  require_finite_query(u, v);
  if (candidate_count(index.size(), exclude) == 0) {
    throw Error(Errc::no_candidates, "no candidate points for nearest-neighbour query");
  }
  const Cell home = index.locate(u, v);
  const long ci = home.i;
  const long cj = home.j;
  GridScan scan{index, table, u, v, exclude_sentinel(exclude), {}, 0};
  for (long r = 0;; ++r) {
    scan.ring(ci, cj, r);
    const double m = scan.margin(ci, cj, r);
    if (std::isinf(m)) break;
    // Strict: a point outside at exactly the margin could still win a tie.
    if (scan.state.best_id != kernels::kNoId && scan.state.best_d2 < m * m) break;
  }
  NNResult out;
  out.id = scan.state.best_id;
  out.distance = std::sqrt(scan.state.best_d2);
  out.cells_examined = scan.cells;
  out.candidates_compared = scan.state.compared;
  return out;
}

NNResult nearest_bruteforce(const UnitCloud& cloud, double u, double v,
                            std::optional<PointId> exclude) {
  require_finite_query(u, v);
  if (candidate_count(cloud.size(), exclude) == 0) {
    throw Error(Errc::no_candidates, "no candidate points for nearest-neighbour query");
  }
  NNResult out;
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t p = 0; p < cloud.size(); ++p) {
    const auto id = static_cast<PointId>(p);
    if (exclude && *exclude == id) continue;
    ++out.candidates_compared;
    const double dx = cloud.x[p] - u;
    const double dy = cloud.y[p] - v;
    const double d2 = dx * dx + dy * dy;
    // Ascending ids: strict < keeps the lowest id among equals.
    if (!found || d2 < best) {
      best = d2;
      out.id = id;
      found = true;
    }
  }
  out.distance = std::sqrt(best);
  out.cells_examined = 1;
  return out;
}

int resolution_for(std::size_t n, double occupancy) {
  if (!(occupancy > 0.0)) throw Error(Errc::out_of_range, "occupancy must be positive");
  const double g = std::round(std::sqrt(static_cast<double>(n) / occupancy));
  return std::max(1, static_cast<int>(g));
}

std::vector<double> bench_points(std::size_t n, std::uint64_t seed, PointDistribution dist) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<double> out(2 * n);
  for (auto& value : out) {
    // 53 random mantissa bits: same stream on every standard library.
    const double uniform = static_cast<double>(rng() >> 11) * 0x1p-53;
    value = dist == PointDistribution::uniform ? uniform : uniform * uniform * uniform;
  }
  return out;
}

std::vector<BenchRow> bench_uniform(const BenchConfig& config,
                                    const kernels::KernelTable& table) {
  if (config.n_values.empty()) throw Error(Errc::invalid_argument, "benchmark needs sizes");
  if (!(config.occupancy > 0.0)) throw Error(Errc::out_of_range, "occupancy must be positive");
  if (config.queries == 0) throw Error(Errc::out_of_range, "benchmark needs queries");

  std::vector<BenchRow> rows;
  for (const std::size_t n : config.n_values) {
    if (n == 0) throw Error(Errc::out_of_range, "benchmark size must be positive");
    const auto pts = bench_points(n, config.seed, config.distribution);
    const auto qs = bench_points(config.queries, config.seed ^ 0x9e3779b97f4a7c15ULL,
                                 PointDistribution::uniform);
    auto cloud = make_unit_cloud(std::vector<double>(pts.begin(), pts.begin() + n),
                                 std::vector<double>(pts.begin() + n, pts.end()));
    BenchRow row;
    row.n = n;
    row.resolution = resolution_for(n, config.occupancy);
    const auto index = GridIndex::build(cloud, row.resolution);

    std::vector<double> candidates(config.queries), cells(config.queries);
    double elapsed_us = 0.0;
    for (std::size_t q = 0; q < config.queries; ++q) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = nearest(index, qs[q], qs[config.queries + q], std::nullopt, table);
      const auto t1 = std::chrono::steady_clock::now();
      elapsed_us += std::chrono::duration<double, std::micro>(t1 - t0).count();
      candidates[q] = static_cast<double>(r.candidates_compared);
      cells[q] = static_cast<double>(r.cells_examined);
    }
    const double qn = static_cast<double>(config.queries);
    for (std::size_t q = 0; q < config.queries; ++q) {
      row.mean_candidates += candidates[q];
      row.mean_cells += cells[q];
    }
    row.mean_candidates /= qn;
    row.mean_cells /= qn;
    std::sort(candidates.begin(), candidates.end());
    std::sort(cells.begin(), cells.end());
    const std::size_t mid = config.queries / 2;
    row.median_candidates = config.queries % 2 == 1
                                ? candidates[mid]
                                : 0.5 * (candidates[mid - 1] + candidates[mid]);
    // Nearest-rank percentile.
    const auto rank = static_cast<std::size_t>(std::ceil(0.99 * qn));
    row.p99_cells = cells[std::max<std::size_t>(rank, 1) - 1];
    row.wall_time_us_mean = elapsed_us / qn;
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows, bool timing) {
  std::string out =
      "n,G,mean_candidates,median_candidates,mean_cells,p99_cells,wall_time_us_mean\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.resolution) + ',' +
           format_double(r.mean_candidates) + ',' + format_double(r.median_candidates) + ',' +
           format_double(r.mean_cells) + ',' + format_double(r.p99_cells) + ',' +
           format_double(timing ? r.wall_time_us_mean : 0.0) + '\n';
  }
  return out;
}

}  // namespace pfm
