#include "copectx/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "copectx/kernels.hpp"
#include "copectx/rank.hpp"

namespace copectx {

namespace {

constexpr double kGuard = 1e-12;

void transpose(const double* a, double* at, std::size_t rows,
               std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) at[j * rows + i] = a[i * cols + j];
}

struct Workspace {
  std::vector<double> wt, wtv, wtw, wtwh, ht, vht, hht, whht, wh;
  void resize(std::size_t rows, std::size_t cols, std::size_t k) {
    wt.resize(k * rows);
    wtv.resize(k * cols);
    wtw.resize(k * k);
    wtwh.resize(k * cols);
    ht.resize(cols * k);
    vht.resize(rows * k);
    hht.resize(k * k);
    whht.resize(rows * k);
    wh.resize(rows * cols);
  }
};

double sweep(const double* v, double* w, double* h, std::size_t rows,
             std::size_t cols, std::size_t k, Workspace& ws) {
  transpose(w, ws.wt.data(), rows, k);
  kernels::matmul(ws.wtv.data(), ws.wt.data(), v, k, rows, cols);
  kernels::matmul(ws.wtw.data(), ws.wt.data(), w, k, rows, k);
  kernels::matmul(ws.wtwh.data(), ws.wtw.data(), h, k, k, cols);
  kernels::mul_update(h, ws.wtv.data(), ws.wtwh.data(), kGuard, k * cols);

  transpose(h, ws.ht.data(), k, cols);
  kernels::matmul(ws.vht.data(), v, ws.ht.data(), rows, cols, k);
  kernels::matmul(ws.hht.data(), h, ws.ht.data(), k, cols, k);
  kernels::matmul(ws.whht.data(), w, ws.hht.data(), rows, k, k);
  kernels::mul_update(w, ws.vht.data(), ws.whht.data(), kGuard, rows * k);

  kernels::matmul(ws.wh.data(), w, h, rows, k, cols);
  return kernels::sqdist(v, ws.wh.data(), rows * cols);
}

using Blocks = std::vector<std::vector<int>>;  // row indices per measurement

void project(double* w, double* h, std::size_t cols, std::size_t k,
             const Blocks& blocks) {
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t l = 0; l < k; ++l) s += h[l * cols + j];
    if (s > 0.0)
      for (std::size_t l = 0; l < k; ++l) h[l * cols + j] /= s;
  }
  for (const auto& rows : blocks) {
    for (std::size_t l = 0; l < k; ++l) {
      double s = 0.0;
      for (int r : rows) s += w[static_cast<std::size_t>(r) * k + l];
      if (s > 0.0)
        for (int r : rows) w[static_cast<std::size_t>(r) * k + l] /= s;
    }
  }
}

double sq_resid(const double* v, const double* w, const double* h,
                std::size_t rows, std::size_t cols, std::size_t k,
                Workspace& ws) {
  kernels::matmul(ws.wh.data(), w, h, rows, k, cols);
  return kernels::sqdist(v, ws.wh.data(), rows * cols);
}

struct Run {
  std::vector<double> w, h;
  double sq = 0.0;
  long long iters = 0;
};

Run run_single(const std::vector<double>& v, std::size_t rows,
               std::size_t cols, std::size_t k, std::uint64_t seed,
               const NmfConfig& cfg, const Blocks& blocks, Workspace& ws) {
  const bool constrained = cfg.mode == NmfConfig::Mode::Ontological;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  const double scale = std::sqrt(std::max(mean, 1e-12) / static_cast<double>(k));

  Run run;
  run.w.resize(rows * k);
  run.h.resize(k * cols);
  for (double& x : run.w) x = std::abs(gauss(rng)) * scale;
  for (double& x : run.h) x = std::abs(gauss(rng)) * scale;
  if (constrained) project(run.w.data(), run.h.data(), cols, k, blocks);

  std::vector<double> best_w = run.w, best_h = run.h;
  double best_sq = sq_resid(v.data(), run.w.data(), run.h.data(), rows, cols,
                            k, ws);
  double window_sq = best_sq;
  for (int it = 0; it < cfg.max_iter; ++it) {
    double sq = sweep(v.data(), run.w.data(), run.h.data(), rows, cols, k, ws);
    if (constrained) {
      project(run.w.data(), run.h.data(), cols, k, blocks);
      sq = sq_resid(v.data(), run.w.data(), run.h.data(), rows, cols, k, ws);
    }
    ++run.iters;
    if (sq < best_sq) {
      best_sq = sq;
      best_w = run.w;
      best_h = run.h;
    }
    if (sq < 1e-26) break;
    if ((it + 1) % 100 == 0) {
      if (window_sq - sq <= 1e-13 * std::max(window_sq, 1e-300)) break;
      window_sq = sq;
    }
  }

  // Alternating least-squares polish: clamp to the nonnegative orthant (and
  // back onto the stochastic slices when constrained), keep only improvements.
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      V(v.data(), static_cast<long long>(rows), static_cast<long long>(cols));
  for (int round = 0; round < 60; ++round) {
    std::vector<double> cand_w = best_w, cand_h = best_h;
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>
        W(cand_w.data(), static_cast<long long>(rows),
          static_cast<long long>(k)),
        H(cand_h.data(), static_cast<long long>(k),
          static_cast<long long>(cols));
    H = W.completeOrthogonalDecomposition().solve(V).cwiseMax(0.0);
    W = H.transpose()
            .completeOrthogonalDecomposition()
            .solve(V.transpose())
            .transpose()
            .cwiseMax(0.0);
    if (constrained)
      project(cand_w.data(), cand_h.data(), cols, k, blocks);
    const double sq =
        sq_resid(v.data(), cand_w.data(), cand_h.data(), rows, cols, k, ws);
    if (sq < best_sq * (1.0 - 1e-12)) {
      best_sq = sq;
      best_w = std::move(cand_w);
      best_h = std::move(cand_h);
    } else {
      break;
    }
  }

  run.w = std::move(best_w);
  run.h = std::move(best_h);
  run.sq = best_sq;
  return run;
}

NmfResult factorize_core(const Eigen::MatrixXd& m, int k, NmfConfig cfg,
                         const Blocks& blocks) {
  if (m.rows() == 0 || m.cols() == 0)
    throw EmptyMatrix("nmf of an empty matrix");
  if (k < 1) throw InvalidParams("nmf inner dimension must be >= 1");
  if (m.minCoeff() < -1e-9)
    throw InvalidParams("nmf input has a negative entry");
  if (cfg.restarts < 1) cfg.restarts = 1;

  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  const auto kk = static_cast<std::size_t>(k);
  std::vector<double> v(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      v[i * cols + j] =
          std::max(0.0, m(static_cast<long long>(i), static_cast<long long>(j)));

  Workspace ws;
  ws.resize(rows, cols, kk);
  Run best;
  std::uint64_t best_seed = cfg.seed;
  bool have = false;
  long long total_iters = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    const std::uint64_t seed_r = cfg.seed + static_cast<std::uint64_t>(r);
    Run run = run_single(v, rows, cols, kk, seed_r, cfg, blocks, ws);
    total_iters += run.iters;
    if (!have || run.sq < best.sq) {
      best = std::move(run);
      best_seed = seed_r;
      have = true;
    }
    if (best.sq <= cfg.success_tol * cfg.success_tol * 1e-6) break;
  }

  NmfResult out;
  out.k = k;
  out.seed = best_seed;
  out.iterations = total_iters;
  out.response.resize(static_cast<long long>(rows), k);
  out.epistemic.resize(k, static_cast<long long>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t l = 0; l < kk; ++l)
      out.response(static_cast<long long>(i), static_cast<long long>(l)) =
          std::max(0.0, best.w[i * kk + l]);
  for (std::size_t l = 0; l < kk; ++l)
    for (std::size_t j = 0; j < cols; ++j)
      out.epistemic(static_cast<long long>(l), static_cast<long long>(j)) =
          std::max(0.0, best.h[l * cols + j]);
  out.residual = (m - out.response * out.epistemic).norm();
  return out;
}

Blocks blocks_of(const CopeMatrix& c) {
  Blocks blocks;
  for (const auto& b : c.block_structure) blocks.push_back(b.rows);
  return blocks;
}

}  // namespace

double nmf_mu_step(const double* v, double* w, double* h, std::size_t rows,
                   std::size_t cols, std::size_t k) {
  Workspace ws;
  ws.resize(rows, cols, k);
  return sweep(v, w, h, rows, cols, k, ws);
}

NmfResult nmf_factorize(const Eigen::MatrixXd& m, int k,
                        const NmfConfig& cfg) {
  return factorize_core(m, k, cfg, {});
}

NmfResult nmf_factorize(const CopeMatrix& c, int k, const NmfConfig& cfg) {
  NmfConfig forced = cfg;
  forced.mode = NmfConfig::Mode::Ontological;
  return factorize_core(c.entries, k, forced, blocks_of(c));
}

EnmfSearchResult enmf_search(const Eigen::MatrixXd& m, const NmfConfig& cfg) {
  EnmfSearchResult out;
  out.k = numerical_rank(m).rank;
  out.best = nmf_factorize(m, out.k, cfg);
  out.found = out.best.residual < cfg.success_tol;
  out.evidence_note =
      out.found
          ? "numerical evidence only: a factorization at the matrix rank was "
            "found by search, which suggests but does not prove an equal-rank "
            "nonnegative model"
          : "numerical evidence only: the search failed to reach the success "
            "tolerance, which suggests but does not prove that no equal-rank "
            "nonnegative model exists";
  return out;
}

EnmfSearchResult enmf_search(const CopeMatrix& c, const NmfConfig& cfg) {
  EnmfSearchResult out;
  out.k = numerical_rank(c.entries).rank;
  out.best = nmf_factorize(c, out.k, cfg);
  out.found = out.best.residual < cfg.success_tol;
  out.evidence_note =
      out.found
          ? "numerical evidence only: a constrained factorization at the "
            "matrix rank was found by search, which suggests but does not "
            "prove an equal-rank nonnegative model"
          : "numerical evidence only: the search failed to reach the success "
            "tolerance, which suggests but does not prove that no equal-rank "
            "nonnegative model exists";
  return out;
}

NmfResult explicit_orthogonal_model() {
  NmfResult out;
  out.k = 2;
  out.response.resize(6, 2);
  out.response << 1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1;
  out.epistemic.resize(2, 6);
  out.epistemic << 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1;
  out.residual = 0.0;
  out.iterations = 0;
  out.seed = 0;
  return out;
}

namespace {

FactorizationCheck check_core(const Eigen::MatrixXd& m,
                              const Eigen::MatrixXd& response,
                              const Eigen::MatrixXd& epistemic,
                              const Blocks& blocks, bool with_blocks,
                              double tol) {
  if (response.rows() != m.rows() || epistemic.cols() != m.cols() ||
      response.cols() != epistemic.rows())
    throw ShapeError("factor shapes do not match the target matrix");
  FactorizationCheck out;
  out.residual = (m - response * epistemic).norm();
  out.nonneg_ok =
      response.minCoeff() >= -1e-14 && epistemic.minCoeff() >= -1e-14;
  bool stochastic = true;
  for (long long j = 0; j < epistemic.cols(); ++j)
    stochastic = stochastic && std::abs(epistemic.col(j).sum() - 1.0) <= tol;
  if (with_blocks) {
    for (const auto& rows : blocks)
      for (long long l = 0; l < response.cols(); ++l) {
        double s = 0.0;
        for (int r : rows) s += response(r, l);
        stochastic = stochastic && std::abs(s - 1.0) <= tol;
      }
  }
  out.stochastic_ok = stochastic;
  return out;
}

}  // namespace

FactorizationCheck verify_factorization(const CopeMatrix& c,
                                        const Eigen::MatrixXd& response,
                                        const Eigen::MatrixXd& epistemic,
                                        double tol) {
  return check_core(c.entries, response, epistemic, blocks_of(c), true, tol);
}

FactorizationCheck verify_factorization(const Eigen::MatrixXd& m,
                                        const Eigen::MatrixXd& response,
                                        const Eigen::MatrixXd& epistemic,
                                        double tol) {
  return check_core(m, response, epistemic, {}, false, tol);
}

}  // namespace copectx
