// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "pfm/factor_map.hpp"
#include "pfm/grid_search.hpp"
#include "pfm/madic_chain.hpp"
#include "pfm/pipeline.hpp"
#include "pfm/pixel_grid.hpp"
#include "support.hpp"

using namespace pfm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<DataMatrix> ca_matrices() {
  std::mt19937_64 rng(20240601);
  std::vector<DataMatrix> out;
  for (int t = 0; t < 200; ++t) out.push_back(testing::random_count_matrix(rng, 5, 8));
  return out;
}

Outcome ca_inertia() {
  Timer timer;
  double worst = 0.0;
  for (const auto& m : ca_matrices()) {
    const auto map = build_correspondence_map(m, max_axes(m));
    const double oracle = total_inertia_oracle(m);
    worst = std::max(worst, std::abs(map.eigenvalues.sum() - oracle) / oracle);
  }
  const double secs = timer.seconds();
  return {worst <= 1e-10 && secs < 5.0,
          fmt("max relative error %.3g (limit 1e-10), %.3f s (limit 5 s)", worst, secs)};
}

Outcome transition_closure() {
  double worst = 0.0;
  for (const auto& m : ca_matrices()) {
    const auto map = build_correspondence_map(m, max_axes(m));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      SupplementaryProfile p{"r", ProfileKind::row_like, {}};
      for (Eigen::Index j = 0; j < m.cols(); ++j) p.values.push_back(m.values(i, j));
      const auto c = project_supplementary(map, p);
      for (int a = 0; a < map.axes(); ++a) worst = std::max(worst, std::abs(c[a] - map.row_coords(i, a)));
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      SupplementaryProfile p{"c", ProfileKind::column_like, {}};
      for (Eigen::Index i = 0; i < m.rows(); ++i) p.values.push_back(m.values(i, j));
      const auto c = project_supplementary(map, p);
      for (int a = 0; a < map.axes(); ++a) worst = std::max(worst, std::abs(c[a] - map.col_coords(j, a)));
    }
  }
  return {worst <= 1e-8, fmt("max coordinate deviation %.3g (limit 1e-8)", worst)};
}

Outcome worked_ca() {
  Eigen::MatrixXd v(2, 2);
  v << 4, 1, 1, 4;
  const auto m = make_matrix(v);
  const auto map = build_correspondence_map(m, 1);
  const double chi2 = total_inertia_oracle(m) * 10.0;
  const double e_lambda = std::abs(map.eigenvalues(0) - 0.36);
  const double e_r0 = std::abs(map.row_coords(0, 0) - 0.6);
  const double e_r1 = std::abs(map.row_coords(1, 0) + 0.6);
  const bool ok = e_lambda <= 1e-12 && e_r0 <= 1e-12 && e_r1 <= 1e-12 &&
                  std::abs(chi2 - 3.6) <= 1e-12 && std::abs(map.eigenvalues(0) * 10 - chi2) <= 1e-11;
  return {ok, fmt("|dlambda| %.2g, |drow| %.2g, chi2 %.15g", e_lambda, std::max(e_r0, e_r1), chi2)};
}

Outcome pixel_conservation() {
  std::mt19937_64 rng(404);
  std::size_t edge_points = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 10000;
    auto cloud = testing::random_cloud(rng, n, static_cast<testing::CloudShape>(t % 4));
    // Force points onto the top edge and the top corner.
    cloud.x[0] = 1.0;
    cloud.y[n - 1] = 1.0;
    if (n > 2) {
      cloud.x[n / 2] = 1.0;
      cloud.y[n / 2] = 1.0;
    }
    for (std::size_t p = 0; p < n; ++p) edge_points += (cloud.x[p] == 1.0 || cloud.y[p] == 1.0);
    for (int g = 10; g >= 2; --g) {
      const auto h = build_histogram(cloud, g);
      if (h.total() != n) return {false, fmt("count total mismatch at base %.0f", g)};
      std::vector<int> seen(n, 0);
      for (const auto& m : h.members)
        for (auto p : m) ++seen[p];
      if (!std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; })) {
        return {false, fmt("membership not a partition at base %.0f", g)};
      }
    }
    const auto chain = build_chain(build_histogram(cloud, 10), cloud);
    for (int g = 10; g >= 2; --g) {
      for (int axis = 0; axis < 2; ++axis) {
        const auto& m = chain.binning(axis, g).marginal;
        if (std::accumulate(m.begin(), m.end(), std::uint64_t{0}) != n) {
          return {false, fmt("chain marginal total mismatch at base %.0f", g)};
        }
      }
    }
  }
  return {true, fmt("100 clouds, bases 10..2, %.0f top-edge points all counted", double(edge_points))};
}

Outcome coarsening() {
  std::mt19937_64 rng(5005);
  int agree = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::uint64_t> m(3 + rng() % 8);
    for (auto& v : m) v = rng() % (t % 3 == 0 ? 3 : 100);
    const AxisBinning b{static_cast<int>(m.size()), uniform_boundaries(static_cast<int>(m.size())), m};
    const auto rule = t % 2 ? MergeRule::least_abs_diff : MergeRule::least_sum;
    agree += coarsen_axis(b, rule).marginal == testing::merge_oracle(m, rule);
  }
  const AxisBinning worked{10, uniform_boundaries(10), {1, 5, 0, 0, 3, 2, 8, 4, 6, 1}};
  const bool example = coarsen_axis(worked, MergeRule::least_sum).marginal ==
                       std::vector<std::uint64_t>{1, 5, 0, 3, 2, 8, 4, 6, 1};
  return {agree == 1000 && example,
          fmt("%.0f/1000 oracle agreements (both rules), worked example ", agree) +
              (example ? "ok" : "WRONG")};
}

Outcome hierarchy() {
  std::mt19937_64 rng(6006);
  for (int t = 0; t < 100; ++t) {
    const auto cloud = testing::random_cloud(rng, 50 + rng() % 500, static_cast<testing::CloudShape>(t % 4));
    const auto chain = build_chain(build_histogram(cloud, 10), cloud,
                                   t % 2 ? MergeRule::least_abs_diff : MergeRule::least_sum);
    for (int g = 2; g <= 9; ++g) {
      const auto fine = partition_at(chain, g + 1);
      const auto coarse = partition_at(chain, g);
      std::map<Cell, Cell> parent;
      for (std::size_t p = 0; p < chain.size(); ++p) {
        const auto [it, fresh] = parent.emplace(fine.labels[p], coarse.labels[p]);
        if (!(it->second == coarse.labels[p])) return {false, fmt("refinement broken at base %.0f", g)};
      }
      for (int axis = 0; axis < 2; ++axis) {
        const auto& bf = chain.binning(axis, g + 1).boundaries;
        const auto& bc = chain.binning(axis, g).boundaries;
        std::vector<double> removed;
        std::set_difference(bf.begin(), bf.end(), bc.begin(), bc.end(), std::back_inserter(removed));
        const bool subset = std::includes(bf.begin(), bf.end(), bc.begin(), bc.end());
        if (!subset || removed.size() != 1 || removed[0] == 0.0 || removed[0] == 1.0) {
          return {false, fmt("boundary nesting broken at base %.0f", g)};
        }
      }
    }
  }
  return {true, "100 chains: partitions nest, one interior boundary removed per axis per stage"};
}

Outcome ultrametric() {
  std::mt19937_64 rng(7007);
  std::size_t triples = 0, violations = 0, bucket_mismatch = 0;
  bool self_ok = true;
  for (int t = 0; t < 20; ++t) {
    const auto cloud = testing::random_cloud(rng, 300, static_cast<testing::CloudShape>(t % 4));
    const auto chain = build_chain(build_histogram(cloud, 10), cloud);
    const auto n = static_cast<PointId>(chain.size());
    for (int s = 0; s < 5000; ++s, ++triples) {
      const PointId a = rng() % n, b = rng() % n, c = rng() % n;
      if (baire_distance(chain, a, c) > std::max(baire_distance(chain, a, b), baire_distance(chain, b, c))) {
        ++violations;
      }
    }
    for (PointId a = 0; a < n; ++a) self_ok &= baire_distance(chain, a, a) == std::ldexp(1.0, -9);
    for (int k = 0; k <= 9; ++k) {
      const PointId id = rng() % n;
      std::vector<PointId> scan;
      for (PointId p = 0; p < n; ++p) {
        if (baire_distance(chain, id, p) <= std::ldexp(1.0, -k)) scan.push_back(p);
      }
      bucket_mismatch += baire_bucket(chain, id, k) != scan;
    }
  }
  return {violations == 0 && self_ok && bucket_mismatch == 0 && triples >= 100000,
          fmt("%.0f triples, %.0f violations, %.0f bucket mismatches", double(triples),
              double(violations), double(bucket_mismatch)) +
              (self_ok ? ", d(a,a)=2^-9" : ", d(a,a) WRONG")};
}

Outcome nn_exactness() {
  Timer timer;
  std::mt19937_64 rng(8008);
  std::size_t total = 0, agree = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const auto cloud = testing::random_cloud(rng, 1000, static_cast<testing::CloudShape>(inst % 4));
    const int g = inst % 5 == 4 ? 1 + static_cast<int>(rng() % 64) : resolution_for(1000, 4.0);
    const auto index = GridIndex::build(cloud, g);
    for (int q = 0; q < 100; ++q) {
      double u = testing::unit(rng), v = testing::unit(rng);
      if (q % 4 == 0) u = static_cast<double>(rng() % 2);
      if (q % 6 == 0) v = static_cast<double>(rng() % 2);
      if (q % 9 == 0) u = static_cast<double>(rng() % (g + 1)) / g;
      std::optional<PointId> ex;
      if (q % 10 == 0) {
        const auto p = static_cast<PointId>(rng() % 1000);
        u = cloud.x[p];
        v = cloud.y[p];
        ex = p;
      }
      const auto a = nearest(index, u, v, ex);
      const auto b = nearest_bruteforce(cloud, u, v, ex);
      ++total;
      agree += a.id == b.id && a.distance == b.distance;
    }
  }
  const auto cross = make_unit_cloud({0.41, 0.51}, {0.41, 0.49});
  const auto res = nearest(GridIndex::build(cross, 10), 0.495, 0.45);
  const bool cross_ok = res.id == 1 && res.id == nearest_bruteforce(cross, 0.495, 0.45).id;
  const double secs = timer.seconds();
  return {agree == total && cross_ok && secs < 10.0,
          fmt("%.0f/%.0f agree, %.3f s (limit 10 s)", double(agree), double(total), secs) +
              (cross_ok ? ", cross-cell case returns B" : ", cross-cell case WRONG")};
}

Outcome constant_time() {
  Timer timer;
  BenchConfig cfg;
  cfg.n_values = {1000, 10000, 100000};
  cfg.occupancy = 4.0;
  cfg.queries = 2000;
  cfg.seed = 12345;
  const auto rows = bench_uniform(cfg);
  const double ratio = rows[2].mean_candidates / rows[0].mean_candidates;
  // Brute-force work: candidates compared per query.
  std::vector<double> brute;
  for (const auto n : cfg.n_values) {
    const auto pts = bench_points(n, cfg.seed, PointDistribution::uniform);
    const auto cloud = make_unit_cloud(std::vector<double>(pts.begin(), pts.begin() + n),
                                       std::vector<double>(pts.begin() + n, pts.end()));
    double sum = 0.0;
    for (int q = 0; q < 20; ++q) {
      sum += static_cast<double>(nearest_bruteforce(cloud, (q + 0.5) / 20.0, 0.37).candidates_compared);
    }
    brute.push_back(sum / 20.0);
  }
  const double brute_ratio = brute[2] / brute[0];
  const double secs = timer.seconds();
  const bool ok = ratio >= 0.5 && ratio <= 2.0 && std::abs(brute_ratio - 100.0) < 1e-9 && secs < 60.0;
  return {ok, fmt("grid mean candidates %.2f -> %.2f (ratio %.3f, limit [0.5,2]); ", rows[0].mean_candidates,
                  rows[2].mean_candidates, ratio) +
                  fmt("brute force ratio %.1fx; %.2f s (limit 60 s)", brute_ratio, secs)};
}

Outcome overlap() {
  std::mt19937_64 rng(1010);
  std::vector<double> x, y;
  for (int p = 0; p < 87; ++p) {
    x.push_back(testing::unit(rng));
    y.push_back(testing::unit(rng));
  }
  const double cx = 0.8125, cy = 0.4476693;
  for (int p = 0; p < 13; ++p) {
    const auto at = (rng() % (x.size() + 1));
    x.insert(x.begin() + at, cx);
    y.insert(y.begin() + at, cy);
  }
  const auto cloud = make_unit_cloud(x, y);
  const auto report = overlap_report(cloud, build_histogram(cloud, 10));
  std::size_t biggest = 0;
  for (const auto& g : report.duplicate_groups) biggest = std::max(biggest, g.members.size());
  return {biggest == 13 && report.max_count >= 13,
          fmt("largest duplicate group %.0f, max_count %.0f", double(biggest), double(report.max_count))};
}

Outcome determinism() {
  const fs::path tmp = fs::path(PFM_TEST_TMP) / "acceptance";
  fs::remove_all(tmp);
  const auto input = testing::write_corpus(tmp, 60, 9, 77);
  PipelineConfig cfg;
  cfg.input = input;
  cfg.sup_rows = {"S1"};
  cfg.sup_cols = {"SC"};
  cfg.seed = 3;
  cfg.out_dir = tmp / "a";
  run_pipeline(cfg);
  cfg.out_dir = tmp / "b";
  run_pipeline(cfg);
  std::size_t same = 0;
  const auto names = artifact_names(RunDepth::index);
  for (const auto& name : names) {
    const auto a = testing::slurp(tmp / "a" / name);
    same += !a.empty() && a == testing::slurp(tmp / "b" / name);
  }
  return {same == names.size(), fmt("%.0f/%.0f artifact files byte-identical", double(same), double(names.size()))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 CA inertia vs chi-square oracle", ca_inertia},
      {"2 transition-formula closure", transition_closure},
      {"3 worked CA instance [[4,1],[1,4]]", worked_ca},
      {"4 pixellation conservation", pixel_conservation},
      {"5 coarsening vs exhaustive oracle", coarsening},
      {"6 partition hierarchy and boundary nesting", hierarchy},
      {"7 Baire ultrametric and buckets", ultrametric},
      {"8 grid nearest-neighbour exactness", nn_exactness},
      {"9 near-constant search work on uniform data", constant_time},
      {"10 overlap diagnostics", overlap},
      {"11 pipeline determinism", determinism},
  };
  std::printf("kernel table: %s\n", std::string(kernels::to_string(kernels::best_table().isa)).c_str());
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
