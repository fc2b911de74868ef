#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "copectx/fragment.hpp"

using namespace copectx;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Every measurement block of a COPE is a stochastic map: each column sums
// to 1 inside the block, entries within [0, 1].
void check_block_stochastic(const CopeMatrix& c) {
  REQUIRE(!c.block_structure.empty());
  for (long long j = 0; j < c.entries.cols(); ++j) {
    for (const auto& b : c.block_structure) {
      double sum = 0.0;
      for (int r : b.rows) {
        const double v = c.entries(r, j);
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

std::vector<Ket> fib_inputs(int n) {
  std::vector<Ket> v;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    v.push_back(bloch_state(std::acos(z), std::fmod(golden * i, 2.0 * kPi)));
  }
  return v;
}

}  // namespace

TEST_CASE("fragment validation catches mixed dimensions and duplicates") {
  Fragment f;
  f.preparations = {{"a", bloch_state(0.3, 0.1)}, {"b", bloch_state(1.0, 2.0)}};
  f.measurements = {{"M", bloch_state(0.5, 0.5)}};
  CHECK_NOTHROW(f.validate());

  Fragment mixed = f;
  mixed.preparations.push_back({"c", tensor(bloch_state(0, 0), bloch_state(0, 0))});
  CHECK_THROWS_AS(mixed.validate(), DimensionMismatch);

  Fragment dup = f;
  dup.preparations.push_back({"a", bloch_state(2.0, 1.0)});
  CHECK_THROWS_AS(dup.validate(), DuplicateInput);
}

TEST_CASE("meqsd_cope fills the closed-form matrix with stochastic blocks") {
  const CopeMatrix c = meqsd_cope({0.3, 0.7});
  REQUIRE(c.entries.rows() == 6);
  REQUIRE(c.entries.cols() == 6);
  CHECK(c.entries(0, 0) == 1.0);
  CHECK(c.entries(0, 2) == doctest::Approx(0.3));
  CHECK(c.entries(0, 4) == doctest::Approx(0.7));
  CHECK(c.entries(4, 0) == doctest::Approx(0.7));
  CHECK(c.entries(5, 5) == 1.0);
  REQUIRE(c.block_structure.size() == 3);
  CHECK(c.block_structure[1].rows == std::vector<int>{2, 3});
  REQUIRE(c.column_labels.size() == 6);
  CHECK(c.column_labels[4] == "g_phi");
  check_block_stochastic(c);
  CHECK_THROWS_AS(meqsd_cope({-0.1, 0.5}), InvalidParams);
  CHECK_THROWS_AS(meqsd_cope({0.5, 1.2}), InvalidParams);
}

TEST_CASE("geometric discrimination fragment reproduces the analytic matrix") {
  for (double cq : {0.1, 0.25, 0.5, 0.8}) {
    const double s_opt = (1.0 + std::sqrt(1.0 - cq)) / 2.0;
    const CopeMatrix analytic = meqsd_cope({cq, s_opt});
    const CopeMatrix geo = cope_from_fragment(meqsd_geometric(cq));
    REQUIRE(geo.entries.rows() == 6);
    REQUIRE(geo.entries.cols() == 6);
    CHECK((geo.entries - analytic.entries).cwiseAbs().maxCoeff() < 1e-12);
    check_block_stochastic(geo);
  }
}

TEST_CASE("sdc_cope fills the closed-form matrix with stochastic blocks") {
  const SdcParams p{0.5, 0.9, 0.4, 0.25};
  const CopeMatrix c = sdc_cope(p);
  REQUIRE(c.entries.rows() == 8);
  REQUIRE(c.entries.cols() == 8);
  CHECK(c.entries(0, 0) == 1.0);
  CHECK(c.entries(0, 2) == doctest::Approx(0.9));
  CHECK(c.entries(0, 4) == doctest::Approx(0.25));
  CHECK(c.entries(0, 6) == doctest::Approx(0.4));
  check_block_stochastic(c);
  CHECK_THROWS_AS(sdc_cope({0.5, 0.9, 0.4, -0.2}), InvalidParams);
}

TEST_CASE("geometric cloning-discrimination fragment matches its parameters") {
  const CloneCoefficients cc = optimal_clone_coefficients(kPi / 4.0);
  const SdcParams p = sdc_params_from(cc);
  CHECK(p.p_s == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.p_f == doctest::Approx(0.9829629131445345).epsilon(1e-12));
  CHECK(p.p_i == doctest::Approx(0.3705904774487395).epsilon(1e-12));
  CHECK(p.delta == doctest::Approx(0.25).epsilon(1e-12));
  const CopeMatrix analytic = sdc_cope(p);
  const CopeMatrix geo = cope_from_fragment(sdc_geometric(cc));
  REQUIRE(geo.entries.rows() == 8);
  CHECK((geo.entries - analytic.entries).cwiseAbs().maxCoeff() < 1e-12);
  check_block_stochastic(geo);
}

TEST_CASE("cloning_fragment yields four preparations per input") {
  const auto inputs = fib_inputs(7);
  std::vector<Ket> clones;
  for (const Ket& a : inputs) {
    const Ket aa = tensor(a, a);
    const Ket comp = tensor(a, qubit_orthogonal(a));
    std::vector<cplx> amps(4);
    for (int i = 0; i < 4; ++i)
      amps[static_cast<std::size_t>(i)] =
          std::cos(0.3) * aa[i] + cplx(0.0, std::sin(0.3)) * comp[i];
    clones.push_back(Ket(amps));
  }
  const Fragment f = cloning_fragment(inputs, clones);
  CHECK(f.preparations.size() == 28);
  CHECK(f.measurements.size() == 28);
  CHECK_NOTHROW(f.validate());
  // within each block: positions 0/2 and 1/3 are exactly orthogonal
  for (int b = 0; b < 7; ++b) {
    CHECK(overlap_prob(f.preparations[4 * b + 0].state,
                       f.preparations[4 * b + 2].state) < 1e-24);
    CHECK(overlap_prob(f.preparations[4 * b + 1].state,
                       f.preparations[4 * b + 3].state) < 1e-24);
  }
}

TEST_CASE("cloning_fragment collapses to two preparations on ideal clones") {
  const auto inputs = fib_inputs(5);
  std::vector<Ket> ideal;
  for (const Ket& a : inputs) ideal.push_back(tensor(a, a));
  const Fragment f = cloning_fragment(inputs, ideal);
  CHECK(f.preparations.size() == 10);
  for (int b = 0; b < 5; ++b)
    CHECK(overlap_prob(f.preparations[2 * b].state,
                       f.preparations[2 * b + 1].state) < 1e-24);
}

TEST_CASE("cloning_fragment rejects shape errors and coinciding inputs") {
  const auto inputs = fib_inputs(3);
  std::vector<Ket> clones;
  for (const Ket& a : inputs) clones.push_back(tensor(a, qubit_orthogonal(a)));
  std::vector<Ket> short_clones(clones.begin(), clones.end() - 1);
  CHECK_THROWS_AS(cloning_fragment(inputs, short_clones), InvalidParams);
  CHECK_THROWS_AS(cloning_fragment({inputs[0], inputs[0], inputs[2]},
                                   clones),
                  DuplicateInput);
  std::vector<Ket> dim2_clones = {inputs[0], inputs[1], inputs[2]};
  CHECK_THROWS_AS(cloning_fragment(inputs, dim2_clones), DimensionMismatch);
}

TEST_CASE("factored form agrees entrywise with the dense yes-rows") {
  const auto inputs = fib_inputs(9);
  std::vector<Ket> clones;
  for (const Ket& a : inputs) {
    const Ket aa = tensor(a, a);
    const Ket comp = tensor(a, qubit_orthogonal(a));
    std::vector<cplx> amps(4);
    for (int i = 0; i < 4; ++i)
      amps[static_cast<std::size_t>(i)] =
          std::cos(0.2) * aa[i] + cplx(0.0, std::sin(0.2)) * comp[i];
    clones.push_back(Ket(amps));
  }
  const Fragment f = cloning_fragment(inputs, clones);
  const CopeMatrix dense = cope_from_fragment(f);
  const FactoredCope fc = factored_cope(f);
  REQUIRE(fc.rows() == 36);
  REQUIRE(fc.cols() == 36);
  CHECK(fc.inner_dim == 16);
  for (long long i = 0; i < fc.rows(); ++i)
    for (long long j = 0; j < fc.cols(); ++j)
      CHECK(std::abs(fc.entry(i, j) - dense.entries(2 * i, j)) < 1e-12);
  const Eigen::MatrixXd yes = fc.dense_yes();
  CHECK(yes.rows() == 36);
  const Eigen::MatrixXd full = fc.expand_dense();
  REQUIRE(full.rows() == 72);
  CHECK((full - dense.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("factored form matches the dense matrix for the small fragments") {
  const Fragment m = meqsd_geometric(0.4);
  const FactoredCope fm = factored_cope(m);
  const CopeMatrix dm = cope_from_fragment(m);
  CHECK(fm.inner_dim == 4);
  CHECK((fm.expand_dense() - dm.entries).cwiseAbs().maxCoeff() < 1e-12);

  const Fragment s = sdc_geometric(optimal_clone_coefficients(0.9));
  const FactoredCope fs = factored_cope(s);
  const CopeMatrix ds = cope_from_fragment(s);
  CHECK(fs.inner_dim == 16);
  CHECK((fs.expand_dense() - ds.entries).cwiseAbs().maxCoeff() < 1e-12);
}
