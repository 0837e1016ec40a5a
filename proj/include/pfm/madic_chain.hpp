#pragma once

// Stagewise coarsening of a base-10 pixellation down to base 2. Each stage
// merges one adjacent pair of bins per axis; the resulting per-point digit
// codes give nested partitions and a Baire (longest common prefix)
// ultrametric.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pfm/pixel_grid.hpp"

namespace pfm {

inline constexpr int kFinestBase = 10;
inline constexpr int kCoarsestBase = 2;
inline constexpr int kChainLevels = kFinestBase - kCoarsestBase + 1;

enum class MergeRule {
  least_sum,       // adjacent pair with the smallest combined count
  least_abs_diff,  // adjacent pair with the smallest |count_i - count_{i+1}|
};

std::string_view to_string(MergeRule rule);
std::optional<MergeRule> parse_merge_rule(std::string_view text);

/// "p-adic" for prime bases, "m-ary" otherwise.
std::string_view base_kind(int base);

struct AxisBinning {
  int base = 0;
  std::vector<double> boundaries;       // base + 1 values, 0 .. 1
  std::vector<std::uint64_t> marginal;  // base values

  friend bool operator==(const AxisBinning&, const AxisBinning&) = default;
};

/// Index i of the adjacent pair (i, i+1) chosen by rule; lowest i on ties.
std::size_t select_merge_pair(const std::vector<std::uint64_t>& marginal, MergeRule rule);

/// One coarsening stage: base g -> g-1. Requires g >= 3.
AxisBinning coarsen_axis(const AxisBinning& binning, MergeRule rule = MergeRule::least_sum);

struct CoarseningChain {
  MergeRule rule = MergeRule::least_sum;
  // Indexed by level = kFinestBase - base.
  std::array<AxisBinning, kChainLevels> x;
  std::array<AxisBinning, kChainLevels> y;
  // Digits, point-major: digits[p * kChainLevels + level].
  std::vector<std::uint8_t> x_digits;
  std::vector<std::uint8_t> y_digits;
  std::vector<std::string> labels;

  std::size_t size() const { return labels.size(); }
  const AxisBinning& binning(int axis, int base) const;
  std::uint8_t digit(int axis, PointId p, int base) const;
  /// Digits from base 10 down to base 2, e.g. "9-8-7-6-5-4-3-2-1".
  std::string code(int axis, PointId p) const;
};

CoarseningChain build_chain(const GridHistogram& hist10, const UnitCloud& cloud,
                            MergeRule rule = MergeRule::least_sum);

struct PartitionLabels {
  int base = 0;
  std::vector<Cell> labels;  // by PointId
};

PartitionLabels partition_at(const CoarseningChain& chain, int base);

/// Number of leading levels, coarsest (base 2) first, at which both digits agree.
int baire_prefix(const CoarseningChain& chain, PointId a, PointId b);

/// 2^-prefix: 1 for points split at base 2, 2^-9 for identical codes.
double baire_distance(const CoarseningChain& chain, PointId a, PointId b);

/// Every point within Baire distance 2^-depth of id, ascending.
std::vector<PointId> baire_bucket(const CoarseningChain& chain, PointId id, int depth);

}  // namespace pfm
