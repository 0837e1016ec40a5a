// Built with -mavx2. Keep this file free of inline library code (no <vector>,
// <span>, <cmath>) so no AVX2-encoded copy of a shared inline function can
// leak into the rest of the program through the linker.

#include <immintrin.h>

#include "kernel_impl.hpp"

namespace pfm::kernels::detail {

void rescale_avx2(const double* in, std::size_t n, double lo, double range, double* out) {
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d rv = _mm256_set1_pd(range);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_sub_pd(x, lov), rv));
  }
  for (; i < n; ++i) out[i] = (in[i] - lo) / range;
}

void bin_index_avx2(const double* u, std::size_t n, const double* interior,
                    std::size_t n_interior, std::uint32_t* out) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(u + i);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n_interior; ++k) {
      const __m256d le = _mm256_cmp_pd(_mm256_set1_pd(interior[k]), x, _CMP_LE_OQ);
      acc = _mm256_add_pd(acc, _mm256_and_pd(le, one));
    }
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm256_cvttpd_epi32(acc));
  }
  for (; i < n; ++i) {
    std::uint32_t c = 0;
    for (std::size_t k = 0; k < n_interior; ++k) c += interior[k] <= u[i] ? 1u : 0u;
    out[i] = c;
  }
}

void uniform_bin_index_avx2(const double* u, std::size_t n, std::uint32_t g,
                            std::uint32_t* out) {
  const __m256d gv = _mm256_set1_pd(static_cast<double>(g));
  const __m256d top = _mm256_set1_pd(static_cast<double>(g) - 1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(u + i);
    __m256d fi = _mm256_floor_pd(_mm256_mul_pd(x, gv));
    fi = _mm256_max_pd(fi, zero);  // NaN in fi selects zero
    fi = _mm256_min_pd(fi, top);
    const __m256d lo = _mm256_div_pd(fi, gv);
    const __m256d hi = _mm256_div_pd(_mm256_add_pd(fi, one), gv);
    const __m256d dec = _mm256_and_pd(_mm256_cmp_pd(fi, zero, _CMP_GT_OQ),
                                      _mm256_cmp_pd(x, lo, _CMP_LT_OQ));
    const __m256d inc = _mm256_andnot_pd(
        dec, _mm256_and_pd(_mm256_cmp_pd(fi, top, _CMP_LT_OQ),
                           _mm256_cmp_pd(x, hi, _CMP_GE_OQ)));
    fi = _mm256_sub_pd(fi, _mm256_and_pd(dec, one));
    fi = _mm256_add_pd(fi, _mm256_and_pd(inc, one));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm256_cvttpd_epi32(fi));
  }
  if (i < n) uniform_bin_index_scalar(u + i, n - i, g, out + i);
}

void nearest_scan_avx2(const double* xs, const double* ys, const std::uint32_t* ids,
                       std::size_t n, double qx, double qy, std::uint32_t exclude,
                       ScanState* state) {
  const __m256d qxv = _mm256_set1_pd(qx);
  const __m256d qyv = _mm256_set1_pd(qy);
  const __m128i exv = _mm_set1_epi32(static_cast<int>(exclude));
  double best = state->best_d2;
  std::uint32_t best_id = state->best_id;
  std::uint64_t compared = 0;
  alignas(32) double d2s[4];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), qxv);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), qyv);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m128i idv = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ids + i));
    const __m256d excl = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm_cmpeq_epi32(idv, exv)));
    const int excl_bits = _mm256_movemask_pd(excl);
    compared += 4 - static_cast<unsigned>(__builtin_popcount(excl_bits));
    const __m256d le = _mm256_andnot_pd(excl, _mm256_cmp_pd(d2, _mm256_set1_pd(best), _CMP_LE_OQ));
    int hits = _mm256_movemask_pd(le);
    if (hits == 0) continue;
    _mm256_store_pd(d2s, d2);
    for (int lane = 0; lane < 4; ++lane) {
      if (!(hits & (1 << lane))) continue;
      const std::uint32_t id = ids[i + lane];
      const double d = d2s[lane];
      if (d < best || (d == best && id < best_id)) {
        best = d;
        best_id = id;
      }
    }
  }
  state->best_d2 = best;
  state->best_id = best_id;
  state->compared += compared;
  if (i < n) nearest_scan_scalar(xs + i, ys + i, ids + i, n - i, qx, qy, exclude, state);
}

}  // namespace pfm::kernels::detail
