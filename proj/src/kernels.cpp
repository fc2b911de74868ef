#include "copectx/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace copectx::kernels {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void gram_rank1_scalar(double* g, const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double vi = v[i];
    double* row = g + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] += vi * v[j];
  }
}

void matmul_scalar(double* c, const double* a, const double* b,
                   std::size_t m, std::size_t k, std::size_t n) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = arow[p];
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void mul_update_scalar(double* w, const double* num, const double* den,
                       double guard, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) w[i] *= num[i] / (den[i] + guard);
}

double sqdist_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

const detail::Table kScalarTable = {
    dot_scalar, gram_rank1_scalar, matmul_scalar, mul_update_scalar,
    sqdist_scalar, "scalar"};

const detail::Table& active_table() {
  static const detail::Table& t = [] {
    const char* env = std::getenv("COPECTX_FORCE_SCALAR");
    const bool force = env != nullptr && env[0] != '\0' && env[0] != '0';
    return detail::select_table(force);
  }();
  return t;
}

}  // namespace

namespace detail {

const Table& scalar_table() { return kScalarTable; }

#ifndef COPECTX_HAVE_AVX2_TU
bool avx2_table_available() { return false; }
const Table& avx2_table() { return kScalarTable; }
#endif

const Table& select_table(bool force_scalar) {
  if (!force_scalar && avx2_table_available()) return avx2_table();
  return kScalarTable;
}

}  // namespace detail

double dot(const double* x, const double* y, std::size_t n) {
  return active_table().dot(x, y, n);
}

void gram_rank1_update(double* g, const double* v, std::size_t n) {
  active_table().gram_rank1_update(g, v, n);
}

void matmul(double* c, const double* a, const double* b,
            std::size_t m, std::size_t k, std::size_t n) {
  active_table().matmul(c, a, b, m, k, n);
}

void mul_update(double* w, const double* num, const double* den,
                double guard, std::size_t n) {
  active_table().mul_update(w, num, den, guard, n);
}

double sqdist(const double* x, const double* y, std::size_t n) {
  return active_table().sqdist(x, y, n);
}

const char* active_backend() { return active_table().name; }

}  // namespace copectx::kernels
