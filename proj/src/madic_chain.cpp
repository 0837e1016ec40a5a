#include "pfm/madic_chain.hpp"

#include <cmath>
#include <limits>

#include "pfm/error.hpp"

namespace pfm {

namespace {

int level_of(int base) {
  if (base < kCoarsestBase || base > kFinestBase) {
    throw Error(Errc::out_of_range, "base " + std::to_string(base) + " outside 2..10");
  }
  return kFinestBase - base;
}

void require_point(const CoarseningChain& chain, PointId p) {
  if (p >= chain.size()) {
    throw Error(Errc::unknown_id, "point id " + std::to_string(p) + " not in chain");
  }
}

std::uint64_t pair_score(std::uint64_t a, std::uint64_t b, MergeRule rule) {
  switch (rule) {
    case MergeRule::least_sum: return a + b;
    case MergeRule::least_abs_diff: return a > b ? a - b : b - a;
  }
  return 0;
}

std::vector<std::uint8_t> axis_digits(const std::array<AxisBinning, kChainLevels>& levels,
                                      const std::vector<double>& coords) {
  const std::size_t n = coords.size();
  std::vector<std::uint8_t> digits(n * kChainLevels);
  for (int level = 0; level < kChainLevels; ++level) {
    const auto bins = assign_bins(coords, levels[level].boundaries);
    for (std::size_t p = 0; p < n; ++p) {
      digits[p * kChainLevels + level] = static_cast<std::uint8_t>(bins[p]);
    }
  }
  return digits;
}

}  // namespace

std::string_view to_string(MergeRule rule) {
  switch (rule) {
    case MergeRule::least_sum: return "least-sum";
    case MergeRule::least_abs_diff: return "least-abs-diff";
  }
  return "unknown";
}

std::optional<MergeRule> parse_merge_rule(std::string_view text) {
  if (text == "least-sum") return MergeRule::least_sum;
  if (text == "least-abs-diff") return MergeRule::least_abs_diff;
  return std::nullopt;
}

std::string_view base_kind(int base) {
  if (base < 2) return "m-ary";
  for (int d = 2; d * d <= base; ++d) {
    if (base % d == 0) return "m-ary";
  }
  return "p-adic";
}

std::size_t select_merge_pair(const std::vector<std::uint64_t>& marginal, MergeRule rule) {
  if (marginal.size() < 2) throw Error(Errc::invalid_argument, "need two bins to merge");
  std::size_t best = 0;
  std::uint64_t best_score = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i + 1 < marginal.size(); ++i) {
    const auto score = pair_score(marginal[i], marginal[i + 1], rule);
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

AxisBinning coarsen_axis(const AxisBinning& binning, MergeRule rule) {
  if (binning.base < 3) {
    throw Error(Errc::out_of_range, "cannot coarsen below base 2 (got base " +
                                        std::to_string(binning.base) + ")");
  }
  if (binning.marginal.size() != static_cast<std::size_t>(binning.base) ||
      binning.boundaries.size() != static_cast<std::size_t>(binning.base) + 1) {
    throw Error(Errc::invalid_argument, "binning arrays do not match its base");
  }
  const std::size_t i = select_merge_pair(binning.marginal, rule);
  AxisBinning out;
  out.base = binning.base - 1;
  out.marginal = binning.marginal;
  out.marginal[i] += out.marginal[i + 1];
  out.marginal.erase(out.marginal.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  out.boundaries = binning.boundaries;
  out.boundaries.erase(out.boundaries.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  return out;
}

const AxisBinning& CoarseningChain::binning(int axis, int base) const {
  return axis == 0 ? x[level_of(base)] : y[level_of(base)];
}

std::uint8_t CoarseningChain::digit(int axis, PointId p, int base) const {
  const auto& d = axis == 0 ? x_digits : y_digits;
  return d[static_cast<std::size_t>(p) * kChainLevels + level_of(base)];
}

std::string CoarseningChain::code(int axis, PointId p) const {
  std::string out;
  for (int base = kFinestBase; base >= kCoarsestBase; --base) {
    if (!out.empty()) out += '-';
    out += std::to_string(digit(axis, p, base));
  }
  return out;
}

CoarseningChain build_chain(const GridHistogram& hist10, const UnitCloud& cloud,
                            MergeRule rule) {
  if (hist10.base != kFinestBase) {
    throw Error(Errc::invalid_argument, "chain needs a base-10 histogram, got base " +
                                            std::to_string(hist10.base));
  }
  if (hist10.total() != cloud.size()) {
    throw Error(Errc::invalid_argument, "histogram was not built from this cloud");
  }
  CoarseningChain chain;
  chain.rule = rule;
  chain.labels = cloud.labels;
  chain.x[0] = {kFinestBase, hist10.boundaries_x, hist10.marginal(0)};
  chain.y[0] = {kFinestBase, hist10.boundaries_y, hist10.marginal(1)};
  for (int level = 1; level < kChainLevels; ++level) {
    chain.x[level] = coarsen_axis(chain.x[level - 1], rule);
    chain.y[level] = coarsen_axis(chain.y[level - 1], rule);
  }
  chain.x_digits = axis_digits(chain.x, cloud.x);
  chain.y_digits = axis_digits(chain.y, cloud.y);
  return chain;
}

PartitionLabels partition_at(const CoarseningChain& chain, int base) {
  level_of(base);
  PartitionLabels out;
  out.base = base;
  out.labels.reserve(chain.size());
  for (std::size_t p = 0; p < chain.size(); ++p) {
    const auto id = static_cast<PointId>(p);
    out.labels.push_back({chain.digit(0, id, base), chain.digit(1, id, base)});
  }
  return out;
}

int baire_prefix(const CoarseningChain& chain, PointId a, PointId b) {
  require_point(chain, a);
  require_point(chain, b);
  int k = 0;
  for (int base = kCoarsestBase; base <= kFinestBase; ++base) {
    if (chain.digit(0, a, base) != chain.digit(0, b, base) ||
        chain.digit(1, a, base) != chain.digit(1, b, base)) {
      break;
    }
    ++k;
  }
  return k;
}

double baire_distance(const CoarseningChain& chain, PointId a, PointId b) {
  return std::ldexp(1.0, -baire_prefix(chain, a, b));
}

std::vector<PointId> baire_bucket(const CoarseningChain& chain, PointId id, int depth) {
  require_point(chain, id);
  if (depth < 0 || depth > kChainLevels) {
    throw Error(Errc::out_of_range, "bucket depth " + std::to_string(depth) + " outside 0..9");
  }
  std::vector<PointId> out;
  // Partitions nest, so agreeing on the first depth levels is the same as
  // sharing the cell at base depth + 1.
  const int base = depth + 1;
  for (std::size_t p = 0; p < chain.size(); ++p) {
    const auto q = static_cast<PointId>(p);
    if (depth == 0 || (chain.digit(0, q, base) == chain.digit(0, id, base) &&
                       chain.digit(1, q, base) == chain.digit(1, id, base))) {
      out.push_back(q);
    }
  }
  return out;
}

}  // namespace pfm
