#include "copectx/ket.hpp"

#include <cmath>

#include "copectx/kernels.hpp"

namespace copectx {

namespace {

double norm_of(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& a : v) s += std::norm(a);
  return std::sqrt(s);
}

}  // namespace

Ket::Ket(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
  const double n = norm_of(amps_);
  if (n < 1e-14) throw ZeroVector("ket amplitudes have (near-)zero norm");
  if (std::abs(n - 1.0) > 1e-15) {
    for (cplx& a : amps_) a /= n;
  }
}

Ket bloch_state(double theta, double phi) {
  return Ket({std::cos(theta / 2.0),
              std::polar(1.0, phi) * std::sin(theta / 2.0)});
}

Ket equatorial_state(double phi) {
  return bloch_state(M_PI / 2.0, phi);
}

Ket tensor(const Ket& a, const Ket& b) {
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(a.dim()) * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) out.push_back(a[i] * b[j]);
  return Ket(std::move(out));
}

cplx inner(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("inner product of kets with different dims");
  cplx s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double overlap_prob(const Ket& a, const Ket& b) {
  return std::norm(inner(a, b));
}

Ket canonical_phase(const Ket& k) {
  for (int i = 0; i < k.dim(); ++i) {
    const double m = std::abs(k[i]);
    if (m > 1e-12) {
      const cplx rot = std::conj(k[i]) / m;
      std::vector<cplx> out(k.amps());
      for (cplx& a : out) a *= rot;
      return Ket(std::move(out));
    }
  }
  return k;
}

Ket orthogonal_in_span(const Ket& v, const Ket& u) {
  if (v.dim() != u.dim())
    throw DimensionMismatch("orthogonal_in_span on kets with different dims");
  // Gram determinant of two unit vectors: 1 - |<v|u>|^2.
  const cplx vu = inner(v, u);
  if (1.0 - std::norm(vu) <= 1e-12)
    throw DegenerateSpan("orthogonal_in_span: vectors are parallel");
  std::vector<cplx> w(u.amps());
  for (int i = 0; i < v.dim(); ++i) w[static_cast<std::size_t>(i)] -= vu * v[i];
  return canonical_phase(Ket(std::move(w)));
}

Ket qubit_orthogonal(const Ket& a) {
  if (a.dim() != 2)
    throw DimensionMismatch("qubit_orthogonal needs a dim-2 ket");
  return canonical_phase(Ket({-std::conj(a[1]), std::conj(a[0])}));
}

HermitianVec projector_embed(const Ket& v) {
  const int d = v.dim();
  HermitianVec h;
  h.op_dim = d;
  h.coords.resize(static_cast<std::size_t>(d) * d);
  std::size_t idx = 0;
  for (int k = 0; k < d; ++k) h.coords[idx++] = std::norm(v[k]);
  const double s2 = std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      const cplx pjk = v[j] * std::conj(v[k]);
      h.coords[idx++] = s2 * pjk.real();
      h.coords[idx++] = s2 * pjk.imag();
    }
  }
  return h;
}

double hvec_inner(const HermitianVec& a, const HermitianVec& b) {
  if (a.op_dim != b.op_dim)
    throw DimensionMismatch("hvec_inner on embeddings with different op dims");
  return kernels::dot(a.coords.data(), b.coords.data(), a.coords.size());
}

double CloneCoefficients::normalization_defect() const {
  const double t = std::cos(phi) * std::cos(phi);
  const double lhs = mu() * mu() + eta() * eta() + 2.0 * (c * c - d * d) * t;
  return std::abs(lhs - 1.0);
}

CloneCoefficients optimal_clone_coefficients(double phi) {
  const double S = std::cos(phi);
  CloneCoefficients k;
  k.phi = phi;
  k.c = std::sqrt((1.0 + S) / (4.0 * (1.0 + S * S)));
  k.d = std::sqrt((1.0 - S) / (4.0 * (1.0 - S * S)));
  return k;
}

std::pair<Ket, Ket> sd_clone_pair(const CloneCoefficients& coeffs) {
  if (coeffs.normalization_defect() > 1e-10)
    throw NormalizationViolation("clone coefficients violate normalization");
  const Ket a = bloch_state(coeffs.phi, 0.0);
  const Ket b({std::cos(coeffs.phi / 2.0), -std::sin(coeffs.phi / 2.0)});
  const Ket aa = tensor(a, a);
  const Ket bb = tensor(b, b);
  const double mu = coeffs.mu();
  const double eta = coeffs.eta();
  std::vector<cplx> al(4), be(4);
  for (int i = 0; i < 4; ++i) {
    al[static_cast<std::size_t>(i)] = mu * aa[i] + eta * bb[i];
    be[static_cast<std::size_t>(i)] = eta * aa[i] + mu * bb[i];
  }
  return {Ket(std::move(al)), Ket(std::move(be))};
}

}  // namespace copectx
