#include <algorithm>
#include <cmath>
#include <limits>

#include "anderson/accelerators.hpp"
#include "anderson/error.hpp"

namespace anderson {

namespace {

// Residual levels below this multiple of ||r_0|| are treated as rounding noise.
constexpr double kRoundingFloor = 1e-12;

}  // namespace

IterationTrace gmres_run(const AffineSpec& spec, const Vector& x0, const AccelConfig& cfg) {
  validate(cfg);
  const FixedPointProblem problem = make_affine(spec, "gmres");
  const Index n = problem.dim;
  if (x0.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "initial guess dimension does not match problem");
  }

  const DenseMatrix A = DenseMatrix::Identity(n, n) - spec.M;
  auto true_residual = [&](const Vector& x) { return (spec.b - A * x).norm(); };

  IterationTrace trace;
  trace.fixed_point_norm = problem.known_fixed_point->norm();
  const Vector& xs = *problem.known_fixed_point;
  auto record = [&](const Vector& x, double res) {
    const std::size_t k = trace.iterates.size();
    const double err = (x - xs).norm();
    trace.iterates.push_back(x);
    trace.residual_norms.push_back(res);
    trace.sigma_k.push_back(k == 0 ? std::numeric_limits<double>::quiet_NaN()
                                   : std::pow(err, 1.0 / static_cast<double>(k)));
    trace.error_ratios.push_back(k > 0 && trace.error_norms.back() > 0.0
                                     ? err / trace.error_norms.back()
                                     : std::numeric_limits<double>::quiet_NaN());
    trace.error_norms.push_back(err);
  };

  const Vector r0 = spec.b - A * x0;
  const double beta0 = r0.norm();
  record(x0, beta0);
  if (beta0 <= cfg.stop_tol) {
    trace.status = RunStatus::Converged;
    return trace;
  }

  const Index k_max = static_cast<Index>(std::min<std::size_t>(cfg.max_iters, n));
  DenseMatrix V = DenseMatrix::Zero(n, k_max + 1);
  DenseMatrix H = DenseMatrix::Zero(k_max + 1, k_max);
  Vector cs = Vector::Zero(k_max);
  Vector sn = Vector::Zero(k_max);
  Vector g = Vector::Zero(k_max + 1);
  V.col(0) = r0 / beta0;
  g(0) = beta0;

  for (Index j = 0; j < k_max; ++j) {
    Vector w = A * V.col(j);
    const double w_norm_in = w.norm();
    for (Index i = 0; i <= j; ++i) {
      H(i, j) = w.dot(V.col(i));
      w -= H(i, j) * V.col(i);
    }
    H(j + 1, j) = w.norm();
    const double h_next = H(j + 1, j);

    for (Index i = 0; i < j; ++i) {
      const double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
      H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
      H(i, j) = t;
    }
    const double denom = std::hypot(H(j, j), H(j + 1, j));
    if (denom == 0.0) throw Error(ErrorKind::Breakdown, "GMRES: singular Hessenberg column");
    cs(j) = H(j, j) / denom;
    sn(j) = H(j + 1, j) / denom;
    H(j, j) = denom;
    H(j + 1, j) = 0.0;
    g(j + 1) = -sn(j) * g(j);
    g(j) = cs(j) * g(j);

    const Vector y = H.topLeftCorner(j + 1, j + 1)
                         .triangularView<Eigen::Upper>()
                         .solve(g.head(j + 1));
    const Vector x = x0 + V.leftCols(j + 1) * y;
    const double res = true_residual(x);
    record(x, res);

    if (res <= cfg.stop_tol) {
      trace.status = RunStatus::Converged;
      return trace;
    }
    if (h_next <= std::numeric_limits<double>::epsilon() * w_norm_in) {
      // Lucky breakdown: the Krylov space is invariant and x solves the system.
      if (res > std::sqrt(std::numeric_limits<double>::epsilon()) * beta0) {
        throw Error(ErrorKind::Breakdown, "GMRES: Arnoldi breakdown without convergence");
      }
      trace.status = RunStatus::Converged;
      return trace;
    }
    V.col(j + 1) = w / h_next;
  }

  trace.status = RunStatus::MaxIters;
  return trace;
}

GmresComparison aa_full_window_vs_gmres_check(const AffineSpec& spec, const Vector& x0,
                                              std::size_t k_max, double rank_tol_scale) {
  if (k_max == 0) throw Error(ErrorKind::InvalidArgument, "k_max must be >= 1");
  const FixedPointProblem problem = make_affine(spec, "gmres-compare");

  AccelConfig aa_cfg;
  aa_cfg.window_m = kUnboundedWindow;
  aa_cfg.max_iters = k_max;
  aa_cfg.stop_tol = std::numeric_limits<double>::min();
  aa_cfg.rank_tol_scale = rank_tol_scale;
  const IterationTrace aa = aa_run(problem, x0, aa_cfg);

  GmresComparison out;
  AccelConfig g_cfg;
  g_cfg.max_iters = k_max > 1 ? k_max - 1 : 1;
  g_cfg.stop_tol = std::numeric_limits<double>::min();
  IterationTrace gm;
  try {
    gm = gmres_run(spec, x0, g_cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Breakdown) throw Error(ErrorKind::StagnationDetected, e.what());
    throw;
  }

  const double floor = kRoundingFloor * gm.residual_norms.front();
  const std::size_t limit = std::min({k_max, aa.iterates.size() - 1, gm.iterates.size()});
  for (std::size_t k = 0; k < limit; ++k) {
    if (gm.residual_norms[k] <= floor) break;
    if (k > 0 && !(gm.residual_norms[k] < gm.residual_norms[k - 1])) {
      throw Error(ErrorKind::StagnationDetected,
                  "GMRES residual did not decrease at step " + std::to_string(k));
    }
    const double dev = (aa.iterates[k + 1] - problem.q(gm.iterates[k])).norm();
    out.deviations.push_back(dev);
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  return out;
}

}  // namespace anderson
