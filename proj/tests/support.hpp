#pragma once

// Shared generators and independent oracles for the unit and acceptance
// suites. Nothing here calls into the code path an oracle checks.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pfm/factor_map.hpp"
#include "pfm/madic_chain.hpp"
#include "pfm/pixel_grid.hpp"

namespace pfm::testing {

inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

/// rows x cols integers in 0..9 with every margin positive.
inline DataMatrix random_count_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_int_distribution<int> cell(0, 9);
  for (;;) {
    Eigen::MatrixXd v(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) v(i, j) = cell(rng);
    if ((v.rowwise().sum().array() > 0).all() && (v.colwise().sum().array() > 0).all()) {
      return make_matrix(v);
    }
  }
}

enum class CloudShape { uniform, clustered, duplicates, edges };

/// Unit-square cloud; the non-uniform shapes stress ties, empty bins and
/// points sitting exactly on 0, 1 and grid lines.
inline UnitCloud random_cloud(std::mt19937_64& rng, std::size_t n, CloudShape shape) {
  std::vector<double> x(n), y(n);
  std::normal_distribution<double> blob(0.0, 0.05);
  for (std::size_t p = 0; p < n; ++p) {
    switch (shape) {
      case CloudShape::uniform:
        x[p] = unit(rng);
        y[p] = unit(rng);
        break;
      case CloudShape::clustered: {
        const double cx = (rng() % 3) * 0.35 + 0.1;
        x[p] = std::clamp(cx + blob(rng), 0.0, 1.0);
        y[p] = std::clamp(cx + blob(rng), 0.0, 1.0);
        break;
      }
      case CloudShape::duplicates:
        if (p > 0 && rng() % 3 != 0) {
          const std::size_t src = rng() % p;
          x[p] = x[src];
          y[p] = y[src];
        } else {
          x[p] = unit(rng);
          y[p] = unit(rng);
        }
        break;
      case CloudShape::edges: {
        static constexpr double kSpecial[] = {0.0, 1.0, 0.1, 0.2, 0.25, 0.5, 0.7, 0.9};
        x[p] = rng() % 2 ? kSpecial[rng() % 8] : unit(rng);
        y[p] = rng() % 2 ? kSpecial[rng() % 8] : unit(rng);
        break;
      }
    }
  }
  return make_unit_cloud(std::move(x), std::move(y));
}

/// Enumerates every adjacent merge and keeps the first one with the least
/// score; returns the merged marginal.
inline std::vector<std::uint64_t> merge_oracle(const std::vector<std::uint64_t>& m,
                                               MergeRule rule) {
  std::vector<std::vector<std::uint64_t>> candidates;
  std::vector<std::uint64_t> scores;
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    std::vector<std::uint64_t> merged;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (k == i + 1) continue;
      merged.push_back(k == i ? m[i] + m[i + 1] : m[k]);
    }
    candidates.push_back(merged);
    const auto a = static_cast<long long>(m[i]);
    const auto b = static_cast<long long>(m[i + 1]);
    scores.push_back(static_cast<std::uint64_t>(rule == MergeRule::least_sum ? a + b
                                                                             : std::llabs(a - b)));
  }
  const auto best = std::min_element(scores.begin(), scores.end()) - scores.begin();
  return candidates[static_cast<std::size_t>(best)];
}

/// Baire distance from first principles: digits compared level by level.
inline double baire_oracle(const CoarseningChain& c, PointId a, PointId b) {
  double d = 1.0;
  for (int base = 2; base <= 10; ++base) {
    const bool same = c.digit(0, a, base) == c.digit(0, b, base) &&
                      c.digit(1, a, base) == c.digit(1, b, base);
    if (!same) break;
    d /= 2.0;
  }
  return d;
}

}  // namespace pfm::testing
