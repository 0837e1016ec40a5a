#pragma once

#include "pfm/kernels.hpp"

namespace pfm::kernels::detail {

void rescale_scalar(const double* in, std::size_t n, double lo, double range, double* out);
void bin_index_scalar(const double* u, std::size_t n, const double* interior,
                      std::size_t n_interior, std::uint32_t* out);
void uniform_bin_index_scalar(const double* u, std::size_t n, std::uint32_t g,
                              std::uint32_t* out);
void nearest_scan_scalar(const double* xs, const double* ys, const std::uint32_t* ids,
                         std::size_t n, double qx, double qy, std::uint32_t exclude,
                         ScanState* state);

#if PFM_BUILD_AVX2
void rescale_avx2(const double* in, std::size_t n, double lo, double range, double* out);
void bin_index_avx2(const double* u, std::size_t n, const double* interior,
                    std::size_t n_interior, std::uint32_t* out);
void uniform_bin_index_avx2(const double* u, std::size_t n, std::uint32_t g,
                            std::uint32_t* out);
void nearest_scan_avx2(const double* xs, const double* ys, const std::uint32_t* ids,
                       std::size_t n, double qx, double qy, std::uint32_t exclude,
                       ScanState* state);
#endif

}  // namespace pfm::kernels::detail
