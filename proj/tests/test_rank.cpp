#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "copectx/fragment.hpp"
#include "copectx/rank.hpp"

using namespace copectx;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd random_low_rank(long long rows, long long cols, int rank,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(rows, rank), b(rank, cols);
  for (long long i = 0; i < rows; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = g(rng);
  for (int i = 0; i < rank; ++i)
    for (long long j = 0; j < cols; ++j) b(i, j) = g(rng);
  return a * b;
}

std::vector<Ket> ring_inputs(int n) {
  std::vector<Ket> v;
  for (int i = 0; i < n; ++i)
    v.push_back(equatorial_state(2.0 * kPi * i / n));
  return v;
}

Fragment tilted_cloning(int n, double angle, std::uint64_t seed = 0) {
  std::vector<Ket> inputs;
  if (seed == 0) {
    inputs = ring_inputs(n);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      inputs.push_back(bloch_state(std::acos(2.0 * u(rng) - 1.0),
                                   2.0 * kPi * u(rng)));
  }
  std::vector<Ket> clones;
  for (const Ket& a : inputs) {
    const Ket aa = tensor(a, a);
    const Ket comp = tensor(a, qubit_orthogonal(a));
    std::vector<cplx> amps(4);
    for (int i = 0; i < 4; ++i)
      amps[static_cast<std::size_t>(i)] =
          std::cos(angle) * aa[i] + cplx(0.0, std::sin(angle)) * comp[i];
    clones.push_back(Ket(amps));
  }
  return cloning_fragment(inputs, clones);
}

}  // namespace

TEST_CASE("numerical_rank counts singular values above the relative cut") {
  CHECK(numerical_rank(Eigen::MatrixXd::Identity(5, 5)).rank == 5);
  const Eigen::MatrixXd m = random_low_rank(20, 14, 6, 1);
  const RankResult r = numerical_rank(m);
  CHECK(r.rank == 6);
  REQUIRE(r.singular_values.size() == 14);
  CHECK(std::is_sorted(r.singular_values.rbegin(), r.singular_values.rend()));
  // coarse tolerance swallows everything below sigma_max
  CHECK(numerical_rank(m, 1.1).rank == 0);
  CHECK_THROWS_AS(numerical_rank(Eigen::MatrixXd()), EmptyMatrix);
}

TEST_CASE("rank is invariant under row and column permutations") {
  const Eigen::MatrixXd m = random_low_rank(12, 12, 5, 2);
  Eigen::PermutationMatrix<Eigen::Dynamic> p(12), q(12);
  p.setIdentity();
  q.setIdentity();
  std::mt19937_64 rng(3);
  std::shuffle(p.indices().data(), p.indices().data() + 12, rng);
  std::shuffle(q.indices().data(), q.indices().data() + 12, rng);
  CHECK(numerical_rank(p * m * q).rank == numerical_rank(m).rank);
}

TEST_CASE("rank never grows when rows are removed") {
  const Eigen::MatrixXd m = random_low_rank(15, 10, 7, 4);
  int previous = numerical_rank(m).rank;
  for (long long keep = 14; keep >= 1; keep -= 3) {
    const int sub = numerical_rank(m.topRows(keep)).rank;
    CHECK(sub <= previous);
    previous = sub;
  }
}

TEST_CASE("exact rational rank agrees with the numerical rank on integers") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-4, 4);
  for (int t = 0; t < 10; ++t) {
    Eigen::MatrixXd m(6, 8);
    for (long long i = 0; i < 6; ++i)
      for (long long j = 0; j < 8; ++j) m(i, j) = entry(rng);
    CHECK(exact_rank_rational(m) == numerical_rank(m).rank);
  }
  std::vector<std::vector<Rational>> nested = {{1, 2, 3}, {2, 4, 6}, {0, 0, 1}};
  CHECK(exact_rank_rational(nested) == 2);
  Eigen::MatrixXd bad(1, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(exact_rank_rational(bad), NonRationalEntry);
}

TEST_CASE("zero_pattern marks entries at or below eps") {
  Eigen::MatrixXd m(2, 3);
  m << 0.0, 1e-11, 0.5,
       1e-9, 0.0, 2.0;
  const ZeroPattern zp = zero_pattern(m, 1e-10);
  CHECK(zp.row_zeros[0] == std::vector<int>{0, 1});
  CHECK(zp.row_zeros[1] == std::vector<int>{1});
  CHECK(zp.col_zeros[0] == std::vector<int>{0});
  CHECK(zp.col_zeros[2].empty());
}

TEST_CASE("antichain_hypothesis accepts incomparable supports, rejects nested") {
  CHECK(antichain_hypothesis(zero_pattern(Eigen::MatrixXd::Identity(4, 4))));
  Eigen::MatrixXd nested(3, 3);
  nested << 0, 1, 1,
            0, 0, 1,
            1, 1, 1;
  CHECK_FALSE(antichain_hypothesis(zero_pattern(nested)));
  const CopeMatrix c = meqsd_cope({0.5, (1.0 + std::sqrt(0.5)) / 2.0});
  CHECK(antichain_hypothesis(zero_pattern(c.entries)));
}

TEST_CASE("central binomial values used by the counting bound are exact") {
  CHECK(central_binomial(1) == 1);
  CHECK(central_binomial(2) == 2);
  CHECK(central_binomial(4) == 6);
  CHECK(central_binomial(10) == 252);
  CHECK(central_binomial(17) == 24310);
  CHECK(central_binomial(18) == 48620);
}

TEST_CASE("sperner_bound brackets n between consecutive central binomials") {
  CHECK_THROWS_AS(sperner_bound(0), InvalidParams);
  for (long long n : {1LL, 2LL, 3LL, 6LL, 8LL, 251LL, 252LL, 400LL, 2000LL}) {
    const SpernerBound sb = sperner_bound(n);
    CHECK(central_binomial(sb.l) <= n);
    CHECK(central_binomial(sb.l + 1) > n);
    CHECK(central_binomial(sb.s_min) >= n);
    if (sb.s_min > 1) CHECK(central_binomial(sb.s_min - 1) < n);
  }
  CHECK(sperner_bound(6).l == 4);
  CHECK(sperner_bound(8).l == 4);
  CHECK(sperner_bound(8).s_min == 5);
  CHECK(sperner_bound(400).l == 10);
  CHECK(sperner_bound(24308).l == 16);
  CHECK(sperner_bound(24309).l == 16);
  CHECK(sperner_bound(24310).l == 17);
  CHECK(sperner_bound(48620).l == 18);
}

TEST_CASE("min_preparations_for_separation is the next central binomial") {
  CHECK(min_preparations_for_separation(3) == 6);
  CHECK(min_preparations_for_separation(15) == 12870);
  CHECK(min_preparations_for_separation(16) == 24310);
}

TEST_CASE("dense verdict on the discrimination matrix at optimal success") {
  const double s = (1.0 + std::sqrt(0.5)) / 2.0;
  const Verdict v = rank_separation_verdict(meqsd_cope({0.5, s}));
  CHECK(v.outcome == Outcome::Contextual);
  CHECK(v.cope_rank == 3);
  CHECK(v.bound_l == 4);
  CHECK(v.n == 6);
  CHECK(v.hypothesis_ok);
  REQUIRE(!v.chain.empty());
  CHECK(v.chain.back().find("contextual") != std::string::npos);
}

TEST_CASE("dense verdict quotients duplicate rows and columns first") {
  // c_q = 0: distinguishable states collapse the matrix to a 2x2 identity
  const Verdict v = rank_separation_verdict(meqsd_cope({0.0, 1.0}));
  CHECK(v.cope_rank == 2);
  CHECK(v.n == 2);
  CHECK(v.outcome == Outcome::Inconclusive);
}

TEST_CASE("dense verdict stays inconclusive off the optimal success point") {
  const Verdict v = rank_separation_verdict(meqsd_cope({0.5, 0.6}));
  CHECK(v.cope_rank == 4);
  CHECK(v.bound_l == 4);
  CHECK(v.outcome == Outcome::Inconclusive);
}

TEST_CASE("verdict is invariant under permutations of the raw matrix") {
  const double s = (1.0 + std::sqrt(0.5)) / 2.0;
  const Eigen::MatrixXd m = meqsd_cope({0.5, s}).entries;
  Eigen::PermutationMatrix<Eigen::Dynamic> p(6), q(6);
  p.setIdentity();
  q.setIdentity();
  std::mt19937_64 rng(9);
  std::shuffle(p.indices().data(), p.indices().data() + 6, rng);
  std::shuffle(q.indices().data(), q.indices().data() + 6, rng);
  const Verdict a = rank_separation_verdict(m);
  const Verdict b = rank_separation_verdict(Eigen::MatrixXd(p * m * q));
  CHECK(a.outcome == b.outcome);
  CHECK(a.cope_rank == b.cope_rank);
  CHECK(a.bound_l == b.bound_l);
  CHECK(a.n == b.n);
}

TEST_CASE("factored rank equals dense rank on cloning fragments") {
  for (int n : {2, 3, 5, 8, 12}) {
    const Fragment f = tilted_cloning(n, 0.2, 40 + n);
    const FactoredCope fc = factored_cope(f);
    const int dense = numerical_rank(fc.dense_yes()).rank;
    CHECK(factored_rank(fc) == dense);
    const RankResult detail = factored_rank_detail(fc);
    CHECK(detail.rank == dense);
    CHECK(std::is_sorted(detail.singular_values.rbegin(),
                         detail.singular_values.rend()));
  }
}

TEST_CASE("factored singular values match dense singular values") {
  const Fragment f = tilted_cloning(6, 0.2, 77);
  const FactoredCope fc = factored_cope(f);
  const RankResult fr = factored_rank_detail(fc);
  const RankResult dr = numerical_rank(fc.dense_yes());
  const std::size_t top = std::min<std::size_t>(10, fr.singular_values.size());
  for (std::size_t i = 0; i < top; ++i)
    CHECK(fr.singular_values[i] ==
          doctest::Approx(dr.singular_values[i]).epsilon(1e-9));
}

TEST_CASE("factored antichain check handles structure and shape errors") {
  const FactoredCope fc = factored_cope(tilted_cloning(5, 0.2));
  const FactoredAntichainResult r = factored_antichain_hypothesis(fc);
  CHECK(r.ok);
  CHECK(r.exhaustive);

  Fragment lop;
  lop.preparations = {{"a", bloch_state(0.1, 0.2)},
                      {"b", bloch_state(1.2, 0.3)},
                      {"c", bloch_state(2.0, 2.0)}};
  lop.measurements = {{"M", bloch_state(0.5, 0.5)}};
  CHECK_THROWS_AS(factored_antichain_hypothesis(factored_cope(lop)),
                  ShapeError);
}

TEST_CASE("factored verdict agrees with the dense verdict") {
  for (int n : {3, 6, 10}) {
    const Fragment f = tilted_cloning(n, 0.25, 60 + n);
    const FactoredCope fc = factored_cope(f);
    const Verdict vf = rank_separation_verdict(fc);
    const Verdict vd = rank_separation_verdict(fc.dense_yes());
    CHECK(vf.cope_rank == vd.cope_rank);
    CHECK(vf.n == vd.n);
    CHECK(vf.bound_l == vd.bound_l);
    CHECK(vf.outcome == vd.outcome);
  }
}

TEST_CASE("verdict with a caller-supplied hypothesis honours that hypothesis") {
  const FactoredCope fc = factored_cope(tilted_cloning(4, 0.2));
  const Verdict trusted =
      rank_separation_verdict(fc, -1.0, 1e-10, FactoredAntichainResult{true, true});
  const Verdict denied =
      rank_separation_verdict(fc, -1.0, 1e-10, FactoredAntichainResult{false, true});
  CHECK(trusted.hypothesis_ok);
  CHECK_FALSE(denied.hypothesis_ok);
  CHECK(denied.outcome == Outcome::Inconclusive);
}

TEST_CASE("empty inputs are rejected across the rank interface") {
  CHECK_THROWS_AS(rank_separation_verdict(Eigen::MatrixXd()), ShapeError);
  FactoredCope empty;
  CHECK_THROWS_AS(factored_rank(empty), EmptyMatrix);
}
