#pragma once

// Data-parallel inner loops shared by pixellation, chain digit coding and
// grid search. Each kernel has a scalar reference and, where the build and
// the CPU allow it, an AVX2 variant. All variants are bit-identical: no FMA
// contraction, the same operation order, IEEE division only.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace pfm::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

inline constexpr std::uint32_t kNoId = std::numeric_limits<std::uint32_t>::max();

/// Running best candidate of a nearest-neighbour scan. Ties on squared
/// distance are resolved towards the lower id.
struct ScanState {
  double best_d2 = std::numeric_limits<double>::infinity();
  std::uint32_t best_id = kNoId;
  std::uint64_t compared = 0;
};

struct KernelTable {
  Isa isa;
  /// out[i] = (in[i] - lo) / range. range must be non-zero.
  void (*rescale)(const double* in, std::size_t n, double lo, double range, double* out);
  /// out[i] = number of interior boundaries <= u[i]. Values at or above the
  /// last boundary land in the top bin, values below 0 in bin 0.
  void (*bin_index)(const double* u, std::size_t n, const double* interior,
                    std::size_t n_interior, std::uint32_t* out);
  /// Same result as bin_index with interior boundaries k/g, k = 1..g-1,
  /// computed in O(1) per value.
  void (*uniform_bin_index)(const double* u, std::size_t n, std::uint32_t g,
                            std::uint32_t* out);
  /// Folds the points (xs[i], ys[i]) with id ids[i] into state; the point
  /// whose id equals exclude is skipped and not counted as compared.
  void (*nearest_scan)(const double* xs, const double* ys, const std::uint32_t* ids,
                       std::size_t n, double qx, double qy, std::uint32_t exclude,
                       ScanState* state);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// Widest table supported by the running CPU.
const KernelTable& best_table();

/// Table for isa, falling back to scalar when unavailable.
const KernelTable& table_for(Isa isa);

bool available(Isa isa);

// Convenience wrappers over the best table.

void rescale(std::span<const double> in, double lo, double range, std::span<double> out);
void bin_index(std::span<const double> u, std::span<const double> interior,
               std::span<std::uint32_t> out);
void uniform_bin_index(std::span<const double> u, std::uint32_t g,
                       std::span<std::uint32_t> out);

}  // namespace pfm::kernels
