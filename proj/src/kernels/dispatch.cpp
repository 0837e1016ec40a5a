#include "kernel_impl.hpp"

namespace pfm::kernels {

namespace {

constexpr KernelTable kScalar{
    Isa::scalar,
    detail::rescale_scalar,
    detail::bin_index_scalar,
    detail::uniform_bin_index_scalar,
    detail::nearest_scan_scalar,
};

#if PFM_BUILD_AVX2
constexpr KernelTable kAvx2{
    Isa::avx2,
    detail::rescale_avx2,
    detail::bin_index_avx2,
    detail::uniform_bin_index_avx2,
    detail::nearest_scan_avx2,
};

bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}
#endif

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if PFM_BUILD_AVX2
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& best_table() {
  if (const KernelTable* t = avx2_table()) return *t;
  return kScalar;
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return avx2_table() != nullptr;
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (isa == Isa::avx2) {
    if (const KernelTable* t = avx2_table()) return *t;
  }
  return kScalar;
}

void rescale(std::span<const double> in, double lo, double range, std::span<double> out) {
  best_table().rescale(in.data(), in.size(), lo, range, out.data());
}

void bin_index(std::span<const double> u, std::span<const double> interior,
               std::span<std::uint32_t> out) {
  best_table().bin_index(u.data(), u.size(), interior.data(), interior.size(), out.data());
}

void uniform_bin_index(std::span<const double> u, std::uint32_t g,
                       std::span<std::uint32_t> out) {
  best_table().uniform_bin_index(u.data(), u.size(), g, out.data());
}

}  // namespace pfm::kernels
