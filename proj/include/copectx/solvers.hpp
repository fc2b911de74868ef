#pragma once

#include <stdexcept>
#include <vector>

#include "copectx/fragment.hpp"

// Root finding on the discrimination success-probability curve and the
// eigenvalue scan over clone-coefficient space.

namespace copectx {

struct NoRootFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RootConfig {
  double grid_step = 1e-3;
  double bisect_tol = 1e-10;
};

struct SuccessCurvePoint {
  double c_q = 0.0;
  std::vector<double> roots;  // ascending, all in [0, 1]
  double optimal = 0.0;       // largest root
};

// Determinant of the minor that controls when the 6x6 discrimination matrix
// drops to rank 3: the three yes-rows plus the all-ones row, against the four
// linearly independent columns. The full 6x6 determinant vanishes identically
// because complement rows pair up, so the minor carries the rank condition.
double meqsd_det(double c_q, double s_q);

// All s_q in [0,1] where the rank condition holds, by sign-change bracketing
// on a grid plus bisection. c_q = 1 (identical states) is rejected.
SuccessCurvePoint solve_success_prob(double c_q, const RootConfig& cfg = {});

std::vector<SuccessCurvePoint> success_curve(double lo, double hi, double step,
                                             const RootConfig& cfg = {});

// (1 + sqrt(1 - c_q)) / 2, the optimal discrimination success probability.
double optimal_success_closed_form(double c_q);

// Eigenvalues of the symmetric 8x8 two-state-cloning matrix, descending.
std::vector<double> sdc_spectrum(const CloneCoefficients& coeffs);

struct SdcScanPoint {
  double c = 0.0, d = 0.0;
  double fourth_eigenvalue = 0.0;
  bool rank3 = false;
};

struct SdcScanConfig {
  int steps = 2001;
  double eig_tol = 1e-9;
};

struct SdcScanResult {
  double phi = 0.0;
  std::vector<SdcScanPoint> points;  // one per grid point on the curve
  long long achieved = 0;            // how many have rank3 = true
};

// Scan the normalization-constrained (c, d) curve at fixed phi and flag the
// points whose fourth eigenvalue vanishes. phi in (0, pi/2) exclusive.
SdcScanResult sdc_rank_search(double phi, const SdcScanConfig& cfg = {});

}  // namespace copectx
