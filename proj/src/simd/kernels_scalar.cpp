#include "topent/simd/kernels.hpp"

#include <cmath>

namespace topent::simd {
namespace {

void abs_diff(double x, const double* ys, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] = std::fabs(x - ys[j]);
}

void sq_diff_acc(double x, const double* ys, double* acc, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double d = x - ys[j];
    const double sq = d * d;
    acc[j] = acc[j] + sq;
  }
}

void not_equal(double x, const double* ys, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] = x != ys[j] ? 1.0 : 0.0;
}

void sqrt_inplace(double* v, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) v[j] = std::sqrt(v[j]);
}

void max_acc(const double* v, double* acc, std::size_t n) {
  // operand order matches _mm256_max_pd(v, acc)
  for (std::size_t j = 0; j < n; ++j) acc[j] = v[j] > acc[j] ? v[j] : acc[j];
}

void sum_acc(const double* v, double* acc, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) acc[j] = acc[j] + v[j];
}

void sum_sq_acc(const double* v, double* acc, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double sq = v[j] * v[j];
    acc[j] = acc[j] + sq;
  }
}

std::size_t mark_below(const double* row, double eps, std::uint8_t* flags, std::size_t n) {
  std::size_t added = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (row[j] < eps && flags[j] == 0) {
      flags[j] = 1;
      ++added;
    }
  }
  return added;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", abs_diff, sq_diff_acc, not_equal, sqrt_inplace,
                                 max_acc,  sum_acc,  sum_sq_acc,  mark_below};
  return table;
}

}  // namespace topent::simd
