#include "copectx/fragment.hpp"

#include <cmath>
#include <set>
#include <utility>

namespace copectx {

namespace {

void check_prob(double v, const char* name) {
  if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
    throw InvalidParams(std::string(name) + " must lie in [0, 1]");
}

// Orthogonal companion of v inside span{p, q}, choosing the anchor v is
// least aligned with.
Ket orth_in_2span(const Ket& v, const Ket& p, const Ket& q) {
  return overlap_prob(v, p) <= overlap_prob(v, q) ? orthogonal_in_span(v, p)
                                                  : orthogonal_in_span(v, q);
}

}  // namespace

int Fragment::dim() const {
  if (!preparations.empty()) return preparations.front().state.dim();
  if (!measurements.empty()) return measurements.front().yes_effect.dim();
  return 0;
}

void Fragment::validate() const {
  if (preparations.empty() || measurements.empty())
    throw InvalidParams("fragment needs at least one preparation and one measurement");
  const int d = dim();
  for (const Preparation& p : preparations)
    if (p.state.dim() != d)
      throw DimensionMismatch("preparation '" + p.label + "' has dim " +
                              std::to_string(p.state.dim()) + ", expected " +
                              std::to_string(d));
  for (const Measurement& m : measurements)
    if (m.yes_effect.dim() != d)
      throw DimensionMismatch("measurement '" + m.label + "' has dim " +
                              std::to_string(m.yes_effect.dim()) +
                              ", expected " + std::to_string(d));
  std::set<std::string> labels;
  for (const Preparation& p : preparations)
    if (!labels.insert(p.label).second)
      throw DuplicateInput("duplicate preparation label '" + p.label + "'");
  labels.clear();
  for (const Measurement& m : measurements)
    if (!labels.insert(m.label).second)
      throw DuplicateInput("duplicate measurement label '" + m.label + "'");
}

void MeqsdParams::validate() const {
  check_prob(c_q, "c_q");
  check_prob(s_q, "s_q");
}

void SdcParams::validate() const {
  check_prob(p_s, "p_s");
  check_prob(p_f, "p_f");
  check_prob(p_i, "p_i");
  check_prob(delta, "delta");
}

Eigen::MatrixXd FactoredCope::expand_dense() const {
  Eigen::MatrixXd yes = dense_yes();
  Eigen::MatrixXd out(2 * yes.rows(), yes.cols());
  for (long long i = 0; i < yes.rows(); ++i) {
    out.row(2 * i) = yes.row(i);
    out.row(2 * i + 1) = Eigen::RowVectorXd::Ones(yes.cols()) - yes.row(i);
  }
  return out;
}

CopeMatrix meqsd_cope(const MeqsdParams& params) {
  params.validate();
  const double c = params.c_q;
  const double s = params.s_q;
  CopeMatrix out;
  out.entries.resize(6, 6);
  out.entries << 1, 0, c, 1 - c, s, 1 - s,
                 0, 1, 1 - c, c, 1 - s, s,
                 c, 1 - c, 1, 0, 1 - s, s,
                 1 - c, c, 0, 1, s, 1 - s,
                 s, 1 - s, 1 - s, s, 1, 0,
                 1 - s, s, s, 1 - s, 0, 1;
  out.block_structure = {{"M_phi", {0, 1}}, {"M_psi", {2, 3}}, {"M_g", {4, 5}}};
  out.column_labels = {"phi", "phi_perp", "psi", "psi_perp", "g_phi", "g_psi"};
  return out;
}

Fragment meqsd_geometric(double c_q) {
  check_prob(c_q, "c_q");
  // Equatorial angles +-delta/2 give overlap c_q; the success-test vectors
  // sit on the bisecting axes at +-pi/2.
  const double half = std::acos(std::sqrt(std::min(std::max(c_q, 0.0), 1.0)));
  const Ket phi = equatorial_state(half);
  const Ket psi = equatorial_state(-half);
  const Ket g_phi = equatorial_state(M_PI / 2.0);
  const Ket g_psi = equatorial_state(-M_PI / 2.0);
  Fragment f;
  f.preparations = {{"phi", phi},
                    {"phi_perp", qubit_orthogonal(phi)},
                    {"psi", psi},
                    {"psi_perp", qubit_orthogonal(psi)},
                    {"g_phi", g_phi},
                    {"g_psi", g_psi}};
  f.measurements = {{"M_phi", phi}, {"M_psi", psi}, {"M_g", g_phi}};
  return f;
}

CopeMatrix sdc_cope(const SdcParams& params) {
  params.validate();
  const double ps = params.p_s, pf = params.p_f, pi = params.p_i,
               de = params.delta;
  CopeMatrix out;
  out.entries.resize(8, 8);
  out.entries << 1, 0, pf, 1 - pf, de, 1 - de, pi, 1 - pi,
                 0, 1, 1 - pf, pf, 1 - de, de, 1 - pi, pi,
                 pf, 1 - pf, 1, 0, pi, 1 - pi, ps, 1 - ps,
                 1 - pf, pf, 0, 1, 1 - pi, pi, 1 - ps, ps,
                 de, 1 - de, pi, 1 - pi, 1, 0, pf, 1 - pf,
                 1 - de, de, 1 - pi, pi, 0, 1, 1 - pf, pf,
                 pi, 1 - pi, ps, 1 - ps, pf, 1 - pf, 1, 0,
                 1 - pi, pi, 1 - ps, ps, 1 - pf, pf, 0, 1;
  out.block_structure = {{"M_aa", {0, 1}},
                         {"M_alpha", {2, 3}},
                         {"M_bb", {4, 5}},
                         {"M_beta", {6, 7}}};
  out.column_labels = {"aa", "aa_perp", "alpha", "alpha_perp",
                       "bb", "bb_perp", "beta", "beta_perp"};
  return out;
}

SdcParams sdc_params_from(const CloneCoefficients& coeffs) {
  const auto [alpha, beta] = sd_clone_pair(coeffs);
  const Ket a = bloch_state(coeffs.phi, 0.0);
  const Ket b({std::cos(coeffs.phi / 2.0), -std::sin(coeffs.phi / 2.0)});
  const Ket aa = tensor(a, a);
  const Ket bb = tensor(b, b);
  SdcParams p;
  p.p_s = overlap_prob(alpha, beta);
  p.p_f = overlap_prob(alpha, aa);
  p.p_i = overlap_prob(alpha, bb);
  p.delta = overlap_prob(aa, bb);
  return p;
}

Fragment sdc_geometric(const CloneCoefficients& coeffs) {
  const auto [alpha, beta] = sd_clone_pair(coeffs);
  const Ket a = bloch_state(coeffs.phi, 0.0);
  const Ket b({std::cos(coeffs.phi / 2.0), -std::sin(coeffs.phi / 2.0)});
  const Ket aa = tensor(a, a);
  const Ket bb = tensor(b, b);
  Fragment f;
  f.preparations = {{"aa", aa},
                    {"aa_perp", orthogonal_in_span(aa, bb)},
                    {"alpha", alpha},
                    {"alpha_perp", orth_in_2span(alpha, aa, bb)},
                    {"bb", bb},
                    {"bb_perp", orthogonal_in_span(bb, aa)},
                    {"beta", beta},
                    {"beta_perp", orth_in_2span(beta, aa, bb)}};
  // Each binary test's complement row doubles as the perp vector's yes-row,
  // since every preparation stays inside span{aa, bb}.
  f.measurements = {{"M_aa", aa}, {"M_alpha", alpha}, {"M_bb", bb}, {"M_beta", beta}};
  return f;
}

Fragment cloning_fragment(const std::vector<Ket>& inputs,
                          const std::vector<Ket>& clones) {
  if (inputs.size() != clones.size())
    throw InvalidParams("cloning_fragment: inputs and clones lengths differ");
  for (const Ket& a : inputs)
    if (a.dim() != 2)
      throw DimensionMismatch("cloning_fragment: inputs must have dim 2");
  for (const Ket& c : clones)
    if (c.dim() != 4)
      throw DimensionMismatch("cloning_fragment: clones must have dim 4");
  const std::size_t n = inputs.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (overlap_prob(inputs[i], inputs[j]) >= 1.0 - 1e-10)
        throw DuplicateInput("cloning_fragment: inputs " + std::to_string(i) +
                             " and " + std::to_string(j) +
                             " coincide as rays");
  Fragment f;
  f.preparations.reserve(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string tag = "[" + std::to_string(i) + "]";
    const Ket aa = tensor(inputs[i], inputs[i]);
    if (overlap_prob(aa, clones[i]) >= 1.0 - 1e-12) {
      // Clone parallel to its ideal: the four-vector block collapses to two.
      f.preparations.push_back({"aa" + tag, aa});
      f.preparations.push_back(
          {"aa_perp" + tag,
           canonical_phase(tensor(inputs[i], qubit_orthogonal(inputs[i])))});
      continue;
    }
    f.preparations.push_back({"aa" + tag, aa});
    f.preparations.push_back({"clone" + tag, clones[i]});
    f.preparations.push_back({"aa_perp" + tag, orthogonal_in_span(aa, clones[i])});
    f.preparations.push_back({"clone_perp" + tag, orthogonal_in_span(clones[i], aa)});
  }
  f.measurements.reserve(f.preparations.size());
  for (const Preparation& p : f.preparations)
    f.measurements.push_back({p.label, p.state});
  return f;
}

CopeMatrix cope_from_fragment(const Fragment& f) {
  f.validate();
  const long long m = static_cast<long long>(f.measurements.size());
  const long long p = static_cast<long long>(f.preparations.size());
  CopeMatrix out;
  out.entries.resize(2 * m, p);
  for (long long i = 0; i < m; ++i) {
    for (long long j = 0; j < p; ++j) {
      const double yes = overlap_prob(f.measurements[static_cast<std::size_t>(i)].yes_effect,
                                      f.preparations[static_cast<std::size_t>(j)].state);
      out.entries(2 * i, j) = yes;
      out.entries(2 * i + 1, j) = 1.0 - yes;
    }
  }
  out.block_structure.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i)
    out.block_structure.push_back(
        {f.measurements[static_cast<std::size_t>(i)].label,
         {static_cast<int>(2 * i), static_cast<int>(2 * i + 1)}});
  out.column_labels.reserve(static_cast<std::size_t>(p));
  for (const Preparation& prep : f.preparations)
    out.column_labels.push_back(prep.label);
  return out;
}

FactoredCope factored_cope(const Fragment& f) {
  f.validate();
  const int d = f.dim();
  const long long m = static_cast<long long>(f.measurements.size());
  const long long p = static_cast<long long>(f.preparations.size());
  FactoredCope fc;
  fc.inner_dim = d * d;
  fc.left.resize(m, fc.inner_dim);
  fc.right.resize(fc.inner_dim, p);
  for (long long i = 0; i < m; ++i) {
    const HermitianVec h =
        projector_embed(f.measurements[static_cast<std::size_t>(i)].yes_effect);
    for (int k = 0; k < fc.inner_dim; ++k)
      fc.left(i, k) = h.coords[static_cast<std::size_t>(k)];
  }
  for (long long j = 0; j < p; ++j) {
    const HermitianVec h =
        projector_embed(f.preparations[static_cast<std::size_t>(j)].state);
    for (int k = 0; k < fc.inner_dim; ++k)
      fc.right(k, j) = h.coords[static_cast<std::size_t>(k)];
  }
  fc.complement_rows.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i)
    fc.complement_rows.push_back(static_cast<int>(2 * i + 1));
  for (const Measurement& mm : f.measurements) fc.row_labels.push_back(mm.label);
  for (const Preparation& pp : f.preparations) fc.col_labels.push_back(pp.label);
  return fc;
}

}  // namespace copectx
