#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "copectx/kernels.hpp"

using namespace copectx;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed,
                               double lo = -2.0, double hi = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double naive_dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

const std::size_t kLens[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 37, 64, 100};

}  // namespace

TEST_CASE("dot matches a naive loop across remainder lengths") {
  for (std::size_t n : kLens) {
    const auto x = random_vec(n, 11 + n), y = random_vec(n, 23 + n);
    const double got = kernels::dot(x.data(), y.data(), n);
    const double want = naive_dot(x.data(), y.data(), n);
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("sqdist matches a naive loop and is zero on identical inputs") {
  for (std::size_t n : kLens) {
    const auto x = random_vec(n, 31 + n), y = random_vec(n, 41 + n);
    double want = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x[i] - y[i];
      want += d * d;
    }
    CHECK(kernels::sqdist(x.data(), y.data(), n) ==
          doctest::Approx(want).epsilon(1e-13));
    CHECK(kernels::sqdist(x.data(), x.data(), n) == 0.0);
  }
}

TEST_CASE("matmul matches a triple loop on odd shapes") {
  const std::size_t shapes[][3] = {
      {1, 1, 1}, {2, 3, 4}, {5, 7, 3}, {8, 16, 8}, {13, 5, 9}, {6, 1, 11}};
  for (const auto& s : shapes) {
    const std::size_t m = s[0], k = s[1], n = s[2];
    const auto a = random_vec(m * k, 100 + m * k);
    const auto b = random_vec(k * n, 200 + k * n);
    std::vector<double> c(m * n, 99.0), want(m * n, 0.0);
    kernels::matmul(c.data(), a.data(), b.data(), m, k, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t t = 0; t < k; ++t) acc += a[i * k + t] * b[t * n + j];
        want[i * n + j] = acc;
      }
    for (std::size_t i = 0; i < m * n; ++i)
      CHECK(c[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

TEST_CASE("gram_rank1_update accumulates a symmetric outer product") {
  const std::size_t n = 16;
  const auto v = random_vec(n, 7), w = random_vec(n, 8);
  std::vector<double> g(n * n, 0.0);
  kernels::gram_rank1_update(g.data(), v.data(), n);
  kernels::gram_rank1_update(g.data(), w.data(), n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(g[i * n + j] ==
            doctest::Approx(v[i] * v[j] + w[i] * w[j]).epsilon(1e-12));
      CHECK(g[i * n + j] == doctest::Approx(g[j * n + i]));
    }
}

TEST_CASE("mul_update applies w *= num / (den + guard)") {
  const std::size_t n = 37;
  auto w = random_vec(n, 51, 0.1, 1.0);
  const auto orig = w;
  const auto num = random_vec(n, 52, 0.0, 2.0);
  auto den = random_vec(n, 53, 0.5, 2.0);
  den[5] = 0.0;  // guard must keep this finite
  const double guard = 1e-12;
  kernels::mul_update(w.data(), num.data(), den.data(), guard, n);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::isfinite(w[i]));
    CHECK(w[i] ==
          doctest::Approx(orig[i] * num[i] / (den[i] + guard)).epsilon(1e-13));
  }
}

TEST_CASE("scalar and simd backends agree to relative 1e-13") {
  if (!kernels::detail::avx2_table_available()) return;
  const auto& sc = kernels::detail::scalar_table();
  const auto& vx = kernels::detail::avx2_table();
  for (std::size_t n : kLens) {
    const auto x = random_vec(n, 61 + n), y = random_vec(n, 71 + n);
    CHECK(vx.dot(x.data(), y.data(), n) ==
          doctest::Approx(sc.dot(x.data(), y.data(), n)).epsilon(1e-13));
    CHECK(vx.sqdist(x.data(), y.data(), n) ==
          doctest::Approx(sc.sqdist(x.data(), y.data(), n)).epsilon(1e-13));

    std::vector<double> ga(n * n, 0.0), gb(n * n, 0.0);
    sc.gram_rank1_update(ga.data(), x.data(), n);
    vx.gram_rank1_update(gb.data(), x.data(), n);
    for (std::size_t i = 0; i < n * n; ++i)
      CHECK(gb[i] == doctest::Approx(ga[i]).epsilon(1e-13));

    auto wa = random_vec(n, 81 + n, 0.1, 1.0);
    auto wb = wa;
    const auto den = random_vec(n, 91 + n, 0.5, 2.0);
    sc.mul_update(wa.data(), y.data(), den.data(), 1e-12, n);
    vx.mul_update(wb.data(), y.data(), den.data(), 1e-12, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(wb[i] == doctest::Approx(wa[i]).epsilon(1e-13));
  }
  const std::size_t m = 9, k = 17, n2 = 5;
  const auto a = random_vec(m * k, 3), b = random_vec(k * n2, 4);
  std::vector<double> ca(m * n2), cb(m * n2);
  sc.matmul(ca.data(), a.data(), b.data(), m, k, n2);
  vx.matmul(cb.data(), a.data(), b.data(), m, k, n2);
  for (std::size_t i = 0; i < m * n2; ++i)
    CHECK(cb[i] == doctest::Approx(ca[i]).epsilon(1e-13));
}

TEST_CASE("select_table honors the force flag and CPU support") {
  const auto& forced = kernels::detail::select_table(true);
  CHECK(std::string(forced.name) == "scalar");
  const auto& free = kernels::detail::select_table(false);
  if (kernels::detail::avx2_table_available())
    CHECK(std::string(free.name) == "avx2");
  else
    CHECK(std::string(free.name) == "scalar");
}

TEST_CASE("active_backend names one of the two implementations") {
  const std::string b = kernels::active_backend();
  CHECK((b == "avx2" || b == "scalar"));
}
