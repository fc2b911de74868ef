#include "copectx/kernels.hpp"

#include <cstring>
#include <immintrin.h>

// Compiled with -mavx2 -mfma; entered only after a runtime CPU check.

namespace copectx::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void gram_rank1_avx2(double* g, const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d vi = _mm256_set1_pd(v[i]);
    double* row = g + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      __m256d r = _mm256_loadu_pd(row + j);
      r = _mm256_fmadd_pd(vi, _mm256_loadu_pd(v + j), r);
      _mm256_storeu_pd(row + j, r);
    }
    for (; j < n; ++j) row[j] += v[i] * v[j];
  }
}

void matmul_avx2(double* c, const double* a, const double* b,
                 std::size_t m, std::size_t k, std::size_t n) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const __m256d aip = _mm256_set1_pd(arow[p]);
      const double* brow = b + p * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d cv = _mm256_loadu_pd(crow + j);
        cv = _mm256_fmadd_pd(aip, _mm256_loadu_pd(brow + j), cv);
        _mm256_storeu_pd(crow + j, cv);
      }
      for (; j < n; ++j) crow[j] += arow[p] * brow[j];
    }
  }
}

void mul_update_avx2(double* w, const double* num, const double* den,
                     double guard, std::size_t n) {
  const __m256d g = _mm256_set1_pd(guard);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wv = _mm256_loadu_pd(w + i);
    __m256d nv = _mm256_loadu_pd(num + i);
    __m256d dv = _mm256_add_pd(_mm256_loadu_pd(den + i), g);
    _mm256_storeu_pd(w + i, _mm256_div_pd(_mm256_mul_pd(wv, nv), dv));
  }
  for (; i < n; ++i) w[i] *= num[i] / (den[i] + guard);
}

double sqdist_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    out += d * d;
  }
  return out;
}

const Table kAvx2Table = {
    dot_avx2, gram_rank1_avx2, matmul_avx2, mul_update_avx2, sqdist_avx2,
    "avx2"};

}  // namespace

bool avx2_table_available() {
  static const bool ok = __builtin_cpu_supports("avx2") &&
                         __builtin_cpu_supports("fma");
  return ok;
}

const Table& avx2_table() { return kAvx2Table; }

}  // namespace copectx::kernels::detail
