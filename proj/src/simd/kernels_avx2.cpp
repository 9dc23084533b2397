#include "topent/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace topent::simd {
namespace {

void abs_diff(double x, const double* ys, double* out, std::size_t n) {
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d d = _mm256_sub_pd(vx, _mm256_loadu_pd(ys + j));
    _mm256_storeu_pd(out + j, _mm256_and_pd(d, abs_mask));
  }
  for (; j < n; ++j) out[j] = std::fabs(x - ys[j]);
}

void sq_diff_acc(double x, const double* ys, double* acc, std::size_t n) {
  const __m256d vx = _mm256_set1_pd(x);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d d = _mm256_sub_pd(vx, _mm256_loadu_pd(ys + j));
    const __m256d sq = _mm256_mul_pd(d, d);
    _mm256_storeu_pd(acc + j, _mm256_add_pd(_mm256_loadu_pd(acc + j), sq));
  }
  for (; j < n; ++j) {
    const double d = x - ys[j];
    const double sq = d * d;
    acc[j] = acc[j] + sq;
  }
}

void not_equal(double x, const double* ys, double* out, std::size_t n) {
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d ne = _mm256_cmp_pd(vx, _mm256_loadu_pd(ys + j), _CMP_NEQ_UQ);
    _mm256_storeu_pd(out + j, _mm256_and_pd(ne, one));
  }
  for (; j < n; ++j) out[j] = x != ys[j] ? 1.0 : 0.0;
}

void sqrt_inplace(double* v, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) _mm256_storeu_pd(v + j, _mm256_sqrt_pd(_mm256_loadu_pd(v + j)));
  for (; j < n; ++j) v[j] = std::sqrt(v[j]);
}

void max_acc(const double* v, double* acc, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4)
    _mm256_storeu_pd(acc + j, _mm256_max_pd(_mm256_loadu_pd(v + j), _mm256_loadu_pd(acc + j)));
  for (; j < n; ++j) acc[j] = v[j] > acc[j] ? v[j] : acc[j];
}

void sum_acc(const double* v, double* acc, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4)
    _mm256_storeu_pd(acc + j, _mm256_add_pd(_mm256_loadu_pd(acc + j), _mm256_loadu_pd(v + j)));
  for (; j < n; ++j) acc[j] = acc[j] + v[j];
}

void sum_sq_acc(const double* v, double* acc, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d x = _mm256_loadu_pd(v + j);
    _mm256_storeu_pd(acc + j, _mm256_add_pd(_mm256_loadu_pd(acc + j), _mm256_mul_pd(x, x)));
  }
  for (; j < n; ++j) {
    const double sq = v[j] * v[j];
    acc[j] = acc[j] + sq;
  }
}

std::size_t mark_below(const double* row, double eps, std::uint8_t* flags, std::size_t n) {
  const __m256d ve = _mm256_set1_pd(eps);
  std::size_t added = 0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(row + j), ve, _CMP_LT_OQ));
    if (mask == 0) continue;
    for (int b = 0; b < 4; ++b) {
      if ((mask >> b) & 1) {
        std::uint8_t& f = flags[j + static_cast<std::size_t>(b)];
        added += f == 0;
        f = 1;
      }
    }
  }
  for (; j < n; ++j) {
    if (row[j] < eps && flags[j] == 0) {
      flags[j] = 1;
      ++added;
    }
  }
  return added;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2",  abs_diff, sq_diff_acc, not_equal, sqrt_inplace,
                                 max_acc, sum_acc,  sum_sq_acc,  mark_below};
  return table;
}

}  // namespace topent::simd
