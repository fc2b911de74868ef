#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "copectx/fragment.hpp"

// Rank computation (numerical and exact-rational), zero patterns, the
// antichain counting bound, and the rank-separation verdict.

namespace copectx {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct EmptyMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonRationalEntry : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RankResult {
  int rank = 0;
  std::vector<double> singular_values;  // descending
};

// Count of singular values above tol * sigma_max. tol < 0 selects the
// default max(rows, cols) * 1e-12. Throws EmptyMatrix.
RankResult numerical_rank(const Eigen::MatrixXd& m, double tol = -1.0);

// Rank of left*right via inner_dim x inner_dim Gram matrices; the dense
// product is never materialized. Gram formation squares the conditioning,
// so the default relative cut is sqrt(max(rows, cols) * machine_eps) rather
// than the dense 1e-12 scale; pass tol >= 0 to override.
int factored_rank(const FactoredCope& fc, double tol = -1.0);
RankResult factored_rank_detail(const FactoredCope& fc, double tol = -1.0);

// Exact rank by Gaussian elimination over rationals.
int exact_rank_rational(const std::vector<std::vector<Rational>>& m);
// Converts entries exactly (every finite double is rational); throws
// NonRationalEntry on NaN or infinity.
int exact_rank_rational(const Eigen::MatrixXd& m);

struct ZeroPattern {
  double eps = 1e-10;
  std::vector<std::vector<int>> row_zeros;  // per row, sorted column indices
  std::vector<std::vector<int>> col_zeros;  // per column, sorted row indices
};

ZeroPattern zero_pattern(const Eigen::MatrixXd& m, double eps = 1e-10);

// True iff row supports and column supports each form an antichain: for
// every ordered pair of rows (i, i') some column is zero in i and positive
// in i', and likewise for columns.
bool antichain_hypothesis(const ZeroPattern& zp);

struct SpernerBound {
  long long n = 0;
  int l = 0;      // largest l with binom(l, l/2) <= n
  int s_min = 0;  // smallest s with binom(s, s/2) >= n
};

BigInt central_binomial(int l);

SpernerBound sperner_bound(long long n);

// Smallest preparation count whose antichain bound exceeds rank_cap:
// binom(rank_cap + 1, (rank_cap + 1)/2).
long long min_preparations_for_separation(int rank_cap);

enum class Outcome { Contextual, Inconclusive };

std::string to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  int cope_rank = 0;
  int bound_l = 0;
  long long n = 0;
  bool hypothesis_ok = false;
  std::vector<std::string> chain;
  std::vector<double> singular_values;
};

// Dense path: duplicate rows and columns are quotiented away (within eps)
// before counting n; the hypothesis additionally requires the quotiented
// form to be square. Contextual iff the hypothesis holds and the antichain
// bound exceeds the matrix rank; the criterion is one-sided and never
// claims noncontextuality. Throws ShapeError on an empty matrix.
Verdict rank_separation_verdict(const CopeMatrix& c, double tol = -1.0,
                                double eps = 1e-10);
Verdict rank_separation_verdict(const Eigen::MatrixXd& m, double tol = -1.0,
                                double eps = 1e-10);

struct FactoredAntichainConfig {
  long long exhaustive_cap = 2000;   // full pairwise check up to this many columns
  long long sample_pairs = 1000000;  // ordered pairs sampled above the cap
  std::uint64_t seed = 99;
};

struct FactoredAntichainResult {
  bool ok = false;
  bool exhaustive = false;
};

// Antichain check for an effects-equal-preparations factored COPE whose
// column count matches its row count. Uses each row's exact in-span
// orthogonality zero and verifies distinctness against all (or sampled)
// other rows.
FactoredAntichainResult factored_antichain_hypothesis(
    const FactoredCope& fc, double eps = 1e-10,
    const FactoredAntichainConfig& cfg = {});

// Factored path: n = column count (builders enforce pairwise-distinct
// preparations), rank via the Gram route, hypothesis via
// factored_antichain_hypothesis.
Verdict rank_separation_verdict(const FactoredCope& fc, double tol = -1.0,
                                double eps = 1e-10,
                                const FactoredAntichainConfig& cfg = {});

// Factored path with the hypothesis established by the caller, for builders
// that certify it from construction knowledge the factors no longer carry.
Verdict rank_separation_verdict(const FactoredCope& fc, double tol, double eps,
                                const FactoredAntichainResult& hypothesis);

}  // namespace copectx
