#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "copectx/ket.hpp"

// Prepare-measure fragments and their conditional-outcome-probability
// matrices, in both analytic (parameter-filled) and geometric
// (state-constructed) forms.

namespace copectx {

struct DuplicateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Preparation {
  std::string label;
  Ket state;
};

// A binary test {P, 1-P} for P = |yes_effect><yes_effect|.
struct Measurement {
  std::string label;
  Ket yes_effect;
};

struct Fragment {
  std::vector<Preparation> preparations;
  std::vector<Measurement> measurements;

  int dim() const;
  // Throws DimensionMismatch on mixed dims, DuplicateInput on repeated labels.
  void validate() const;
};

struct MeasurementBlock {
  std::string label;
  std::vector<int> rows;
};

// Rows are measurement outcomes grouped in blocks, columns are preparations.
// Every column sums to 1 inside each block.
struct CopeMatrix {
  Eigen::MatrixXd entries;
  std::vector<MeasurementBlock> block_structure;
  std::vector<std::string> column_labels;
};

struct MeqsdParams {
  double c_q = 0.0;
  double s_q = 0.0;
  void validate() const;  // throws InvalidParams outside [0,1]
};

struct SdcParams {
  double p_s = 0.0, p_f = 0.0, p_i = 0.0, delta = 0.0;
  void validate() const;
};

// Yes-rows of a COPE held as a product of two thin factors: left rows are
// effect embeddings, right columns are preparation embeddings, inner
// dimension d^2. No-rows are complements of yes-rows and are never stored;
// expand_dense() materializes them for small cross-checks.
struct FactoredCope {
  int inner_dim = 0;
  Eigen::MatrixXd left;       // n_effects x inner_dim
  Eigen::MatrixXd right;      // inner_dim x n_preparations
  std::vector<int> complement_rows;  // odd rows of the block-expanded layout
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  long long rows() const { return left.rows(); }
  long long cols() const { return right.cols(); }
  double entry(long long i, long long j) const {
    return left.row(i).dot(right.col(j));
  }
  // Yes-only dense matrix (rows() x cols()).
  Eigen::MatrixXd dense_yes() const { return left * right; }
  // Block-expanded dense matrix (2*rows() x cols()) with complement rows.
  Eigen::MatrixXd expand_dense() const;
};

// The 6x6 minimum-error-discrimination matrix in confusability c_q and
// success probability s_q; rows [phi, phi_perp, psi, psi_perp, g, g_perp],
// columns in the same order.
CopeMatrix meqsd_cope(const MeqsdParams& params);

// Equatorial-state construction at the optimal success probability
// s_q = (1 + sqrt(1 - c_q))/2; its COPE equals meqsd_cope at those params.
Fragment meqsd_geometric(double c_q);

// The 8x8 two-state-cloning matrix; rows and columns ordered
// [aa, aa_perp, alpha, alpha_perp, bb, bb_perp, beta, beta_perp].
CopeMatrix sdc_cope(const SdcParams& params);

// Geometric construction from clone coefficients; 8 preparations = effects,
// orthogonal companions taken inside span{aa, bb}.
Fragment sdc_geometric(const CloneCoefficients& coeffs);

// Derived overlap parameters of a clone-coefficient configuration.
SdcParams sdc_params_from(const CloneCoefficients& coeffs);

// Fragment over dim-4 states: for each input a, the ideal clone |aa>, the
// supplied clone, and the two orthogonal companions inside their span; the
// effect list equals the preparation list. A clone parallel to its ideal
// collapses that input's block to two preparations (the ideal clone and its
// canonical companion a x a_perp). Throws DuplicateInput when two inputs
// coincide as rays.
Fragment cloning_fragment(const std::vector<Ket>& inputs,
                          const std::vector<Ket>& clones);

// Block-expanded COPE: per measurement, the yes-row of overlap probabilities
// and its complement row.
CopeMatrix cope_from_fragment(const Fragment& f);

// Embedding factorization of the yes-rows; entries match cope_from_fragment
// yes-rows to 1e-12 without materializing the dense product.
FactoredCope factored_cope(const Fragment& f);

}  // namespace copectx
