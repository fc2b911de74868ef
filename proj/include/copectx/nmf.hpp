#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "copectx/fragment.hpp"

namespace copectx {

struct NmfConfig {
  enum class Mode { Plain, Ontological };
  int max_iter = 20000;
  int restarts = 50;
  std::uint64_t seed = 0;
  Mode mode = Mode::Plain;
  double success_tol = 1e-6;
};

struct NmfResult {
  Eigen::MatrixXd response;   // rows x k, nonnegative
  Eigen::MatrixXd epistemic;  // k x cols, nonnegative
  int k = 0;
  double residual = 0.0;  // Frobenius norm of (m - response * epistemic)
  long long iterations = 0;
  std::uint64_t seed = 0;  // restart seed that produced the kept factors
};

struct FactorizationCheck {
  double residual = 0.0;
  bool nonneg_ok = false;
  bool stochastic_ok = false;
};

// One multiplicative update sweep on row-major buffers; returns the squared
// Frobenius residual after the sweep. Exposed for the monotonicity tests.
double nmf_mu_step(const double* v, double* w, double* h, std::size_t rows,
                   std::size_t cols, std::size_t k);

// Under Mode::Ontological the epistemic columns are normalized to sum 1; the
// block overload also normalizes response rows so each measurement's rows
// sum to the all-ones row. The plain overload knows no blocks and skips the
// response constraint.
NmfResult nmf_factorize(const Eigen::MatrixXd& m, int k,
                        const NmfConfig& cfg = {});
// Block-structured matrices always carry the stochasticity constraints, so
// this overload forces Mode::Ontological.
NmfResult nmf_factorize(const CopeMatrix& c, int k, const NmfConfig& cfg = {});

struct EnmfSearchResult {
  int k = 0;  // matrix rank, the only inner dimension tried
  bool found = false;
  NmfResult best;
  std::string evidence_note;
};

EnmfSearchResult enmf_search(const Eigen::MatrixXd& m,
                             const NmfConfig& cfg = {});
EnmfSearchResult enmf_search(const CopeMatrix& c, const NmfConfig& cfg = {});

// Closed-form two-ontic-state deterministic model for the orthogonal-pair
// discrimination statistics: each preparation family maps to one ontic state
// and every response is 0/1, so the residual against meqsd_cope(0, 1) is
// exactly zero.
NmfResult explicit_orthogonal_model();

FactorizationCheck verify_factorization(const CopeMatrix& c,
                                        const Eigen::MatrixXd& response,
                                        const Eigen::MatrixXd& epistemic,
                                        double tol = 1e-9);
// Without block structure only the epistemic column sums enter the
// stochasticity check.
FactorizationCheck verify_factorization(const Eigen::MatrixXd& m,
                                        const Eigen::MatrixXd& response,
                                        const Eigen::MatrixXd& epistemic,
                                        double tol = 1e-9);

}  // namespace copectx
