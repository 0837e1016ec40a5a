#include <cmath>

#include "kernel_impl.hpp"

namespace pfm::kernels::detail {

void rescale_scalar(const double* in, std::size_t n, double lo, double range, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (in[i] - lo) / range;
}

void bin_index_scalar(const double* u, std::size_t n, const double* interior,
                      std::size_t n_interior, std::uint32_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t c = 0;
    for (std::size_t k = 0; k < n_interior; ++k) c += interior[k] <= u[i] ? 1u : 0u;
    out[i] = c;
  }
}

void uniform_bin_index_scalar(const double* u, std::size_t n, std::uint32_t g,
                              std::uint32_t* out) {
  const double gd = static_cast<double>(g);
  const double top = gd - 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fi = std::floor(u[i] * gd);
    if (!(fi >= 0.0)) fi = 0.0;
    if (fi > top) fi = top;
    // floor(u*g) is off by at most one from the boundary-membership answer.
    const double lo = fi / gd;
    const double hi = (fi + 1.0) / gd;
    if (fi > 0.0 && u[i] < lo) {
      fi -= 1.0;
    } else if (fi < top && u[i] >= hi) {
      fi += 1.0;
    }
    out[i] = static_cast<std::uint32_t>(fi);
  }
}

void nearest_scan_scalar(const double* xs, const double* ys, const std::uint32_t* ids,
                         std::size_t n, double qx, double qy, std::uint32_t exclude,
                         ScanState* state) {
  double best = state->best_d2;
  std::uint32_t best_id = state->best_id;
  std::uint64_t compared = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ids[i] == exclude) continue;
    ++compared;
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best || (d2 == best && ids[i] < best_id)) {
      best = d2;
      best_id = ids[i];
    }
  }
  state->best_d2 = best;
  state->best_id = best_id;
  state->compared += compared;
}

}  // namespace pfm::kernels::detail
