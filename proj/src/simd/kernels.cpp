#include "topent/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace topent::simd {

#if defined(TOPENT_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

namespace {

// -1: no override, otherwise an Isa value
std::atomic<int> g_override{-1};

bool env_forces_scalar() {
  const char* v = std::getenv("TOPENT_SIMD");
  return v != nullptr && std::strcmp(v, "scalar") == 0;
}

void check_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("simd kernel: span sizes differ");
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(TOPENT_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  const int forced = g_override.load(std::memory_order_relaxed);
  if (forced == static_cast<int>(Isa::scalar)) return scalar_kernels();
  if (forced == static_cast<int>(Isa::avx2)) {
    if (const auto* t = avx2_kernels()) return *t;
    throw std::runtime_error("AVX2 kernels requested but unavailable");
  }
  static const KernelTable& chosen = [] () -> const KernelTable& {
    if (env_forces_scalar()) return scalar_kernels();
    if (const auto* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

Isa active_isa() { return &active() == &scalar_kernels() ? Isa::scalar : Isa::avx2; }

void set_override(Isa isa) { g_override.store(static_cast<int>(isa), std::memory_order_relaxed); }
void reset_override() { g_override.store(-1, std::memory_order_relaxed); }

void abs_diff(double x, std::span<const double> ys, std::span<double> out) {
  check_size(ys.size(), out.size());
  active().abs_diff(x, ys.data(), out.data(), ys.size());
}
void sq_diff_acc(double x, std::span<const double> ys, std::span<double> acc) {
  check_size(ys.size(), acc.size());
  active().sq_diff_acc(x, ys.data(), acc.data(), ys.size());
}
void not_equal(double x, std::span<const double> ys, std::span<double> out) {
  check_size(ys.size(), out.size());
  active().not_equal(x, ys.data(), out.data(), ys.size());
}
void sqrt_inplace(std::span<double> v) { active().sqrt_inplace(v.data(), v.size()); }
void max_acc(std::span<const double> v, std::span<double> acc) {
  check_size(v.size(), acc.size());
  active().max_acc(v.data(), acc.data(), v.size());
}
void sum_acc(std::span<const double> v, std::span<double> acc) {
  check_size(v.size(), acc.size());
  active().sum_acc(v.data(), acc.data(), v.size());
}
void sum_sq_acc(std::span<const double> v, std::span<double> acc) {
  check_size(v.size(), acc.size());
  active().sum_sq_acc(v.data(), acc.data(), v.size());
}
std::size_t mark_below(std::span<const double> row, double eps, std::span<std::uint8_t> flags) {
  check_size(row.size(), flags.size());
  return active().mark_below(row.data(), eps, flags.data(), row.size());
}

}  // namespace topent::simd
