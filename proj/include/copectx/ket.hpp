#pragma once

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

// Pure-state linear algebra: Bloch-sphere states, tensor products, overlap
// probabilities, orthogonal companions inside two-dimensional spans, and the
// real Hermitian-basis embedding of rank-1 projectors.

namespace copectx {

using cplx = std::complex<double>;

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateSpan : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NormalizationViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroVector : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Ket {
 public:
  // Normalizes the amplitudes; throws ZeroVector below norm 1e-14.
  explicit Ket(std::vector<cplx> amplitudes);

  int dim() const { return static_cast<int>(amps_.size()); }
  const std::vector<cplx>& amps() const { return amps_; }
  cplx operator[](int i) const { return amps_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<cplx> amps_;
};

// (cos(theta/2), e^{i phi} sin(theta/2)).
Ket bloch_state(double theta, double phi);

// bloch_state(pi/2, phi).
Ket equatorial_state(double phi);

// Kronecker product, a's index major.
Ket tensor(const Ket& a, const Ket& b);

// <a|b>; throws DimensionMismatch.
cplx inner(const Ket& a, const Ket& b);

// |<a|b>|^2.
double overlap_prob(const Ket& a, const Ket& b);

// Global-phase canonicalization: first amplitude of magnitude > 1e-12 made
// real positive.
Ket canonical_phase(const Ket& k);

// Unit vector in span{v, u} orthogonal to v, canonical phase; throws
// DegenerateSpan when the Gram determinant of {v, u} is <= 1e-12.
Ket orthogonal_in_span(const Ket& v, const Ket& u);

// The unique orthogonal ray of a dim-2 ket, canonical phase.
Ket qubit_orthogonal(const Ket& a);

// Coordinates of |v><v| in the orthonormal Hermitian operator basis: the d
// diagonal units E_kk first, then (E_jk + E_kj)/sqrt(2) and
// (i E_jk - i E_kj)/sqrt(2) for j < k in lexicographic order. Inner products
// of embeddings reproduce overlap probabilities.
struct HermitianVec {
  int op_dim = 0;
  std::vector<double> coords;
};

HermitianVec projector_embed(const Ket& v);

double hvec_inner(const HermitianVec& a, const HermitianVec& b);

// Coefficients of the symmetric two-state cloner outputs
// alpha = mu*|aa> + eta*|bb>, beta = eta*|aa> + mu*|bb> with mu = c + d,
// eta = c - d and <a|b> = cos(phi). Valid coefficients satisfy
// (c+d)^2 + (c-d)^2 + 2(c^2-d^2) cos^2(phi) = 1.
struct CloneCoefficients {
  double phi = 0.0;
  double c = 0.0;
  double d = 0.0;

  double mu() const { return c + d; }
  double eta() const { return c - d; }
  // |lhs - 1| of the normalization constraint.
  double normalization_defect() const;
};

// The coefficient pair that keeps the clone pair unit-norm with
// <alpha|beta> = <a|b>: c^2 = (1+S)/(4(1+S^2)), d^2 = (1-S)/(4(1-S^2)) for
// S = cos(phi), phi in (0, pi/2).
CloneCoefficients optimal_clone_coefficients(double phi);

// (alpha, beta) built over a = (cos(phi/2), sin(phi/2)) and
// b = (cos(phi/2), -sin(phi/2)), so <a|b> = cos(phi) with real amplitudes.
// Throws NormalizationViolation when the coefficient invariant fails by more
// than 1e-10.
std::pair<Ket, Ket> sd_clone_pair(const CloneCoefficients& coeffs);

}  // namespace copectx
