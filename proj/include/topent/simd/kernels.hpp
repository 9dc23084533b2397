#pragma once

// Elementwise kernels behind the d_{n,p} distance sweeps and the greedy
// separation scan. Every kernel has a scalar reference implementation; the
// AVX2 variants (x86-64 only) are picked at runtime and must agree with the
// reference bit for bit. Set TOPENT_SIMD=scalar to force the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace topent::simd {

struct KernelTable {
  const char* name;
  // out[j] = |x - ys[j]|
  void (*abs_diff)(double x, const double* ys, double* out, std::size_t n);
  // acc[j] += (x - ys[j])^2
  void (*sq_diff_acc)(double x, const double* ys, double* acc, std::size_t n);
  // out[j] = x != ys[j] ? 1 : 0
  void (*not_equal)(double x, const double* ys, double* out, std::size_t n);
  void (*sqrt_inplace)(double* v, std::size_t n);
  // acc[j] = max(acc[j], v[j])
  void (*max_acc)(const double* v, double* acc, std::size_t n);
  // acc[j] += v[j]
  void (*sum_acc)(const double* v, double* acc, std::size_t n);
  // acc[j] += v[j]^2
  void (*sum_sq_acc)(const double* v, double* acc, std::size_t n);
  // flags[j] |= row[j] < eps; returns the number of flags newly set
  std::size_t (*mark_below)(const double* row, double eps, std::uint8_t* flags, std::size_t n);
};

enum class Isa { scalar, avx2 };

const KernelTable& scalar_kernels();
/// nullptr when the AVX2 variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();

/// The table used by the library: AVX2 when available, unless overridden.
const KernelTable& active();
Isa active_isa();

/// Force a table for the whole process (equivalence tests).
void set_override(Isa isa);
void reset_override();

// span front ends over the active table

void abs_diff(double x, std::span<const double> ys, std::span<double> out);
void sq_diff_acc(double x, std::span<const double> ys, std::span<double> acc);
void not_equal(double x, std::span<const double> ys, std::span<double> out);
void sqrt_inplace(std::span<double> v);
void max_acc(std::span<const double> v, std::span<double> acc);
void sum_acc(std::span<const double> v, std::span<double> acc);
void sum_sq_acc(std::span<const double> v, std::span<double> acc);
std::size_t mark_below(std::span<const double> row, double eps, std::span<std::uint8_t> flags);

}  // namespace topent::simd
