#include "copectx/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace copectx {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix4d rank_minor(double c_q, double s_q) {
  MeqsdParams p{c_q, s_q};
  const Eigen::MatrixXd& m = meqsd_cope(p).entries;
  const int rows[3] = {0, 2, 4};
  const int cols[4] = {0, 1, 2, 5};
  Eigen::Matrix4d out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = m(rows[i], cols[j]);
  out.row(3).setOnes();
  return out;
}

double bisect(double lo, double hi, double flo, double c_q, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = meqsd_det(c_q, mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double meqsd_det(double c_q, double s_q) {
  return rank_minor(c_q, s_q).determinant();
}

double optimal_success_closed_form(double c_q) {
  return 0.5 * (1.0 + std::sqrt(1.0 - c_q));
}

SuccessCurvePoint solve_success_prob(double c_q, const RootConfig& cfg) {
  if (c_q < 0.0 || c_q > 1.0)
    throw InvalidParams("confusability must lie in [0, 1]");
  if (c_q == 1.0)
    throw DegenerateInput(
        "identical states cannot be discriminated: c_q = 1 has no success "
        "curve");
  SuccessCurvePoint out;
  out.c_q = c_q;
  if (c_q == 0.0) {
    // The determinant vanishes identically in s_q; the rank condition then
    // holds exactly at the endpoints.
    out.roots = {0.0, 1.0};
    out.optimal = 1.0;
    return out;
  }
  double prev_s = 0.0;
  double prev_f = meqsd_det(c_q, prev_s);
  for (double s = cfg.grid_step; s <= 1.0 + 1e-15; s += cfg.grid_step) {
    const double sc = std::min(s, 1.0);
    const double f = meqsd_det(c_q, sc);
    if (std::abs(prev_f) <= 1e-13) {
      out.roots.push_back(prev_s);
    } else if ((prev_f < 0.0) != (f < 0.0) && std::abs(f) > 1e-13) {
      out.roots.push_back(bisect(prev_s, sc, prev_f, c_q, cfg.bisect_tol));
    }
    prev_s = sc;
    prev_f = f;
  }
  if (std::abs(prev_f) <= 1e-13) out.roots.push_back(prev_s);
  std::sort(out.roots.begin(), out.roots.end());
  out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                              [](double a, double b) {
                                return std::abs(a - b) < 1e-8;
                              }),
                  out.roots.end());
  if (out.roots.empty())
    throw NoRootFound("no rank-condition root found; check the grid config");
  out.optimal = out.roots.back();
  return out;
}

std::vector<SuccessCurvePoint> success_curve(double lo, double hi, double step,
                                             const RootConfig& cfg) {
  if (step <= 0.0) throw InvalidParams("sweep step must be positive");
  std::vector<SuccessCurvePoint> out;
  for (double c = lo; c <= hi + 1e-12; c += step)
    out.push_back(solve_success_prob(std::min(c, hi), cfg));
  return out;
}

std::vector<double> sdc_spectrum(const CloneCoefficients& coeffs) {
  const CopeMatrix c = sdc_cope(sdc_params_from(coeffs));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.entries);
  std::vector<double> spec(es.eigenvalues().size());
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    spec[static_cast<std::size_t>(i)] =
        es.eigenvalues()(es.eigenvalues().size() - 1 - i);
  return spec;
}

SdcScanResult sdc_rank_search(double phi, const SdcScanConfig& cfg) {
  if (!(phi > 1e-12 && phi < kPi / 2 - 1e-12))
    throw DegenerateInput(
        "clone-pair angle must lie strictly between 0 and pi/2");
  if (cfg.steps < 2) throw InvalidParams("scan needs at least 2 steps");
  SdcScanResult out;
  out.phi = phi;
  const double t = std::cos(phi) * std::cos(phi);
  const double cs = std::sqrt(2.0 + 2.0 * t);
  const double ds = std::sqrt(2.0 - 2.0 * t);
  out.points.reserve(static_cast<std::size_t>(cfg.steps));
  for (int i = 0; i < cfg.steps; ++i) {
    const double u = (kPi / 2) * i / (cfg.steps - 1);
    SdcScanPoint p;
    p.c = std::cos(u) / cs;
    p.d = std::sin(u) / ds;
    const std::vector<double> spec = sdc_spectrum({phi, p.c, p.d});
    p.fourth_eigenvalue = spec[3];
    p.rank3 = p.fourth_eigenvalue < cfg.eig_tol;
    if (p.rank3) ++out.achieved;
    out.points.push_back(p);
  }
  return out;
}

}  // namespace copectx
