#pragma once

#include <cstddef>

// Low-level dense kernels used on the hot paths (Gram accumulation over
// embedding rows, pairwise overlap dots, NMF update loops). Every kernel has
// a scalar reference implementation and, on x86-64, an AVX2+FMA variant; the
// backend is chosen once at first use. Set COPECTX_FORCE_SCALAR=1 in the
// environment to pin the scalar path.

namespace copectx::kernels {

// Inner product of x and y over n doubles.
double dot(const double* x, const double* y, std::size_t n);

// g (row-major n x n) += v v^T, full symmetric update.
void gram_rank1_update(double* g, const double* v, std::size_t n);

// C (m x n) = A (m x k) * B (k x n), all row-major; C is overwritten.
void matmul(double* c, const double* a, const double* b,
            std::size_t m, std::size_t k, std::size_t n);

// w[i] *= num[i] / (den[i] + guard), the multiplicative NMF update step.
void mul_update(double* w, const double* num, const double* den,
                double guard, std::size_t n);

// Squared Euclidean distance between x and y over n doubles.
double sqdist(const double* x, const double* y, std::size_t n);

// Name of the backend in use: "avx2" or "scalar".
const char* active_backend();

namespace detail {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*gram_rank1_update)(double*, const double*, std::size_t);
  void (*matmul)(double*, const double*, const double*,
                 std::size_t, std::size_t, std::size_t);
  void (*mul_update)(double*, const double*, const double*, double, std::size_t);
  double (*sqdist)(const double*, const double*, std::size_t);
  const char* name;
};

const Table& scalar_table();
bool avx2_table_available();
const Table& avx2_table();

// Pure selection logic, exposed for tests: picks avx2 iff it is compiled in,
// the CPU supports it, and force_scalar is false.
const Table& select_table(bool force_scalar);

}  // namespace detail

}  // namespace copectx::kernels
