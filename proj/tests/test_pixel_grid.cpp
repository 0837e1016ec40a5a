#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "pfm/error.hpp"
#include "pfm/pixel_grid.hpp"
#include "support.hpp"

using namespace pfm;

TEST_CASE("rescale_unit maps extremes to 0 and 1") {
  const std::vector<double> x{-2, 0, 2}, y{-2, 0, 2};
  const auto c = rescale_unit(x, y, {"a", "b", "c"});
  CHECK(c.x == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(c.y == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(c.rescale_x.min == -2.0);
  CHECK(c.rescale_x.max == 2.0);
  CHECK(c.labels[2] == "c");
}

TEST_CASE("degenerate axes map to 0") {
  const std::vector<double> x1{3.7}, y1{-1.2};
  const auto single = rescale_unit(x1, y1, {});
  CHECK(single.x[0] == 0.0);
  CHECK(single.y[0] == 0.0);
  CHECK(single.labels[0] == "0");

  const std::vector<double> x{0, 10}, y{5, 5};
  const auto flat = rescale_unit(x, y, {});
  CHECK(flat.x == std::vector<double>{0.0, 1.0});
  CHECK(flat.y == std::vector<double>{0.0, 0.0});
  CHECK(flat.rescale_y.degenerate());
  CHECK(flat.rescale_y.apply(123.0) == 0.0);
}

TEST_CASE("rescale is order preserving and invertible") {
  std::mt19937_64 rng(8);
  std::vector<double> x(500), y(500);
  for (auto& v : x) v = testing::unit(rng) * 10 - 3;
  for (auto& v : y) v = testing::unit(rng) * 0.01 + 7;
  const auto c = rescale_unit(x, y, {});
  for (std::size_t a = 0; a < x.size(); ++a) {
    CHECK(c.x[a] >= 0.0);
    CHECK(c.x[a] <= 1.0);
    const double back = c.rescale_x.min + c.x[a] * (c.rescale_x.max - c.rescale_x.min);
    CHECK(std::abs(back - x[a]) < 1e-12);
    const std::size_t b = (a * 31) % x.size();
    if (x[a] < x[b]) CHECK(c.x[a] <= c.x[b]);
  }
}

TEST_CASE("rescale_unit rejects empty input") {
  const std::vector<double> none;
  CHECK_THROWS_AS(rescale_unit(none, none, {}), Error);
}

TEST_CASE("assign_cell examples") {
  CHECK(assign_cell(0.05, 0.95, 10) == Cell{0, 9});
  CHECK(assign_cell(1.0, 1.0, 10) == Cell{9, 9});
  CHECK(assign_cell(0.0, 0.0, 10) == Cell{0, 0});
  const std::vector<double> bx{0, 0.25, 1};
  const auto b = uniform_boundaries(2);
  CHECK(assign_cell(0.3, 0.3, bx, b).i == 1);
  CHECK(assign_cell(0.25, 0.3, bx, b).i == 1);
  CHECK(assign_cell(0.2499, 0.3, bx, b).i == 0);
}

TEST_CASE("assign_cell errors") {
  CHECK_THROWS_AS(assign_cell(-0.01, 0.5, 10), Error);
  CHECK_THROWS_AS(assign_cell(0.5, 1.01, 10), Error);
  const std::vector<double> bad{0, 0.6, 0.4, 1};
  const auto ok = uniform_boundaries(3);
  CHECK_THROWS_AS(assign_cell(0.5, 0.5, bad, ok), Error);
}

TEST_CASE("assign_cell agrees with floor arithmetic off grid lines") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5000; ++t) {
    const double u = testing::unit(rng);
    const int g = 2 + static_cast<int>(rng() % 9);
    const auto cell = assign_cell(u, u, g);
    const auto f = static_cast<std::uint32_t>(std::min(std::floor(u * g), g - 1.0));
    // Only values within an ulp of a grid line may differ from plain floor.
    if (cell.i != f) {
      const double line = static_cast<double>(std::max(cell.i, f)) / g;
      CHECK(std::abs(u - line) < 1e-15);
    }
  }
}

TEST_CASE("histogram examples") {
  const auto cloud = make_unit_cloud({0.05, 0.95, 0.05}, {0.05, 0.95, 0.95});
  const auto h = build_histogram(cloud, 10);
  CHECK(h.count(0, 0) == 1);
  CHECK(h.count(9, 9) == 1);
  CHECK(h.count(0, 9) == 1);
  CHECK(h.total() == 3);
  CHECK(h.members_of(0, 9) == std::vector<PointId>{2});

  const auto one = build_histogram(make_unit_cloud({0.4}, {0.4}), 10);
  CHECK(one.total() == 1);
  CHECK(std::count(one.counts.begin(), one.counts.end(), 1u) == 1);
}

TEST_CASE("histogram conservation and hashing monotonicity") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const auto shape = static_cast<testing::CloudShape>(trial % 4);
    const auto cloud = testing::random_cloud(rng, 1 + rng() % 2000, shape);
    for (int g = 2; g <= 10; ++g) {
      const auto h = build_histogram(cloud, g);
      REQUIRE(h.total() == cloud.size());
      std::vector<int> seen(cloud.size(), 0);
      for (std::size_t c = 0; c < h.members.size(); ++c) {
        CHECK(h.members[c].size() == h.counts[c]);
        for (auto p : h.members[c]) ++seen[p];
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
      const auto mx = h.marginal(0);
      CHECK(std::accumulate(mx.begin(), mx.end(), std::uint64_t{0}) == cloud.size());
    }
  }
  // Identical points share a cell.
  const auto dup = make_unit_cloud({0.3, 0.7, 0.3}, {0.3, 0.1, 0.3});
  const auto h = build_histogram(dup, 7);
  for (const auto& m : h.members) {
    if (std::find(m.begin(), m.end(), 0u) != m.end()) {
      CHECK(std::find(m.begin(), m.end(), 2u) != m.end());
    }
  }
}

TEST_CASE("overlap report") {
  const auto cloud = make_unit_cloud({0.25, 0.25, 0.9, 0.25, 0.1}, {0.25, 0.25, 0.9, 0.25, 0.6});
  const auto r = overlap_report(cloud, build_histogram(cloud, 10));
  REQUIRE(r.duplicate_groups.size() == 1);
  CHECK(r.duplicate_groups[0].members == std::vector<PointId>{0, 1, 3});
  CHECK(r.max_count >= 3);
  CHECK(r.max_cell == Cell{2, 2});
  CHECK(r.redundant_points() == 2);

  const auto distinct = make_unit_cloud({0.1, 0.2, 0.3}, {0.1, 0.2, 0.3});
  CHECK(overlap_report(distinct, build_histogram(distinct, 10)).duplicate_groups.empty());
}

TEST_CASE("overlap redundancy equals n minus distinct coordinates") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto cloud = testing::random_cloud(rng, 300, testing::CloudShape::duplicates);
    const auto r = overlap_report(cloud, build_histogram(cloud, 10));
    std::set<std::pair<double, double>> distinct;
    for (std::size_t p = 0; p < cloud.size(); ++p) distinct.insert({cloud.x[p], cloud.y[p]});
    CHECK(r.redundant_points() == cloud.size() - distinct.size());
  }
}
