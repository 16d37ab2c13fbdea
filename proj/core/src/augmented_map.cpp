#include "anderson/augmented_map.hpp"

#include <cmath>
#include <limits>

#include "anderson/error.hpp"

namespace anderson {

namespace {

constexpr double kSingularityThreshold = 1e-12;

// Differences newest - block_i, i = 1..m, of per-block values.
DenseMatrix newest_minus_blocks(const std::vector<Vector>& values) {
  const Index m = static_cast<Index>(values.size()) - 1;
  const Index n = values.front().size();
  DenseMatrix out(n, m);
  for (Index i = 1; i <= m; ++i) out.col(i - 1) = values.front() - values[i];
  return out;
}

std::vector<Vector> blocks_of(const AugmentedState& z) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(z.window() + 1));
  for (Index i = 0; i <= z.window(); ++i) out.emplace_back(z.block(i));
  return out;
}

std::vector<Vector> map_blocks(const FixedPointProblem& problem, const AugmentedState& z) {
  if (z.n != problem.dim) {
    throw Error(ErrorKind::InvalidArgument, "augmented state block size does not match problem");
  }
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(z.window() + 1));
  for (Index i = 0; i <= z.window(); ++i) out.push_back(problem.q(z.block(i)));
  return out;
}

Vector stack(std::span<const Vector> newest_first) {
  if (newest_first.empty()) throw Error(ErrorKind::InvalidArgument, "no blocks given");
  const Index n = newest_first.front().size();
  Vector out(n * static_cast<Index>(newest_first.size()));
  for (std::size_t i = 0; i < newest_first.size(); ++i) {
    if (newest_first[i].size() != n) {
      throw Error(ErrorKind::InvalidArgument, "blocks must share one length");
    }
    out.segment(static_cast<Index>(i) * n, n) = newest_first[i];
  }
  return out;
}

}  // namespace

AugmentedState::AugmentedState(Vector s, Index block_size) : stacked(std::move(s)), n(block_size) {
  if (n <= 0 || stacked.size() % n != 0 || stacked.size() / n < 2) {
    throw Error(ErrorKind::InvalidArgument, "augmented state needs n(m+1) entries with m >= 1");
  }
}

AugmentedState AugmentedState::from_blocks(std::span<const Vector> newest_first) {
  return AugmentedState(stack(newest_first), newest_first.front().size());
}

AugmentedState AugmentedState::repeated(const Vector& x, Index m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "window must be >= 1");
  return AugmentedState(x.replicate(m + 1, 1), x.size());
}

Direction Direction::from_blocks(std::span<const Vector> newest_first) {
  return Direction(stack(newest_first), newest_first.front().size());
}

Direction Direction::unit(Vector s, Index block_size) {
  const double norm = s.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::InvalidArgument, "cannot normalize a zero or non-finite direction");
  }
  Direction d(s / norm, block_size);
  d.unit_norm = true;
  return d;
}

DenseMatrix build_D(const AugmentedState& z) { return newest_minus_blocks(blocks_of(z)); }

DenseMatrix build_R(const FixedPointProblem& problem, const AugmentedState& z) {
  const std::vector<Vector> qs = map_blocks(problem, z);
  std::vector<Vector> rs;
  rs.reserve(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) rs.push_back(z.block(static_cast<Index>(i)) - qs[i]);
  return newest_minus_blocks(rs);
}

DenseMatrix build_Q(const FixedPointProblem& problem, const AugmentedState& z) {
  return newest_minus_blocks(map_blocks(problem, z));
}

Vector beta_of_z(const FixedPointProblem& problem, const AugmentedState& z, double rank_tol_scale) {
  const std::vector<Vector> qs = map_blocks(problem, z);
  std::vector<Vector> rs;
  rs.reserve(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) rs.push_back(z.block(static_cast<Index>(i)) - qs[i]);
  return min_norm_lstsq(newest_minus_blocks(rs), rs.front(), rank_tol_scale).coeffs;
}

AugmentedState psi_apply(const FixedPointProblem& problem, const AugmentedState& z,
                         double rank_tol_scale) {
  const std::vector<Vector> qs = map_blocks(problem, z);
  std::vector<Vector> rs;
  rs.reserve(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) rs.push_back(z.block(static_cast<Index>(i)) - qs[i]);

  const Vector beta = min_norm_lstsq(newest_minus_blocks(rs), rs.front(), rank_tol_scale).coeffs;
  const Index n = z.n;
  Vector out(z.stacked.size());
  out.head(n) = qs.front() + newest_minus_blocks(qs) * beta;
  out.tail(out.size() - n) = z.stacked.head(z.stacked.size() - n);
  return AugmentedState(std::move(out), n);
}

AugmentedState fixed_point_state(const FixedPointProblem& problem, Index m) {
  if (!problem.known_fixed_point) {
    throw Error(ErrorKind::InvalidProblem, "problem has no known fixed point");
  }
  return AugmentedState::repeated(*problem.known_fixed_point, m);
}

Linearization linearization_from_M(const DenseMatrix& M) {
  if (M.rows() != M.cols() || M.size() == 0) {
    throw Error(ErrorKind::InvalidArgument, "linearization needs a square M");
  }
  Linearization lin{M, DenseMatrix::Identity(M.rows(), M.cols()) - M};
  if (min_singular_value(lin.A) <= kSingularityThreshold) {
    throw Error(ErrorKind::SingularA, "I - M is numerically singular");
  }
  return lin;
}

Linearization linearize_at_fixed_point(const FixedPointProblem& problem) {
  if (!problem.jacobian) throw Error(ErrorKind::MissingJacobian, "problem has no jacobian");
  if (!problem.known_fixed_point) {
    throw Error(ErrorKind::InvalidProblem, "problem has no known fixed point");
  }
  return linearization_from_M((*problem.jacobian)(*problem.known_fixed_point));
}

Vector beta_hat(const DenseMatrix& A, const Direction& d, double rank_tol_scale) {
  if (A.rows() != d.n || A.cols() != d.n) {
    throw Error(ErrorKind::InvalidArgument, "A does not match direction block size");
  }
  const Vector rhs = A * d.block(0);
  return min_norm_lstsq(A * build_D(d), rhs, rank_tol_scale).coeffs;
}

DirectionalDerivativeResult directional_derivative(const Linearization& lin, const Direction& d,
                                                   double rank_tol_scale) {
  DirectionalDerivativeResult out;
  const DenseMatrix D = build_D(d);
  out.beta_hat = beta_hat(lin.A, d, rank_tol_scale);
  out.formula_rank_ok = numerical_rank(D, rank_tol_scale) == d.window();

  const Index n = d.n;
  out.value.resize(d.stacked.size());
  out.value.head(n) = lin.M * (d.block(0) + D * out.beta_hat);
  out.value.tail(out.value.size() - n) = d.stacked.head(d.stacked.size() - n);
  return out;
}

DenseMatrix directional_derivative_matrix(const DenseMatrix& M, const Vector& beta_hat) {
  const Index n = M.rows();
  const Index m = beta_hat.size();
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "beta_hat must be non-empty");
  DenseMatrix J = DenseMatrix::Zero(n * (m + 1), n * (m + 1));
  J.block(0, 0, n, n) = (1.0 + beta_hat.sum()) * M;
  for (Index j = 1; j <= m; ++j) {
    J.block(0, j * n, n, n) = -beta_hat(j - 1) * M;
    J.block(j * n, (j - 1) * n, n, n).setIdentity();
  }
  return J;
}

std::vector<Vector> directional_derivative_fd(const FixedPointProblem& problem, const Direction& d,
                                              std::span<const double> h_values,
                                              double rank_tol_scale) {
  const AugmentedState z_star = fixed_point_state(problem, d.window());
  std::vector<Vector> out;
  out.reserve(h_values.size());
  for (double h : h_values) {
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step sizes must be > 0");
    const AugmentedState zh(z_star.stacked + h * d.stacked, d.n);
    out.push_back((psi_apply(problem, zh, rank_tol_scale).stacked - z_star.stacked) / h);
  }
  return out;
}

double lipschitz_bound_linear_m1(const DenseMatrix& A) {
  if (A.rows() != A.cols()) throw Error(ErrorKind::InvalidArgument, "A must be square");
  const double smin = min_singular_value(A);
  if (smin <= kSingularityThreshold) throw Error(ErrorKind::SingularA, "A is numerically singular");
  const DenseMatrix I = DenseMatrix::Identity(A.rows(), A.cols());
  return (operator_norm_2(A) / smin + 1.0) * operator_norm_2(I - A) + 1.0;
}

double default_c_r(const FixedPointProblem& problem) {
  return min_singular_value(linearize_at_fixed_point(problem).A);
}

double lipschitz_bound_nonlinear_m1(const FixedPointProblem& problem, std::optional<double> c_r) {
  const Linearization lin = linearize_at_fixed_point(problem);
  const double c = c_r ? *c_r : min_singular_value(lin.A);
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "c_r must be > 0");
  return 3.0 + (4.0 + 4.0 / c) * operator_norm_2(lin.A);
}

std::vector<BetaProbeTable> discontinuity_probe_beta(const FixedPointProblem& problem,
                                                     const AugmentedState& z0,
                                                     std::span<const Vector> directions,
                                                     std::span<const double> eps_values,
                                                     double rank_tol_scale) {
  std::vector<BetaProbeTable> tables;
  tables.reserve(directions.size());
  for (const Vector& e : directions) {
    if (e.size() != z0.stacked.size()) {
      throw Error(ErrorKind::InvalidArgument, "probe direction length does not match z0");
    }
    BetaProbeTable table;
    table.direction = e;
    for (double eps : eps_values) {
      const AugmentedState z(z0.stacked + eps * e, z0.n);
      table.rows.push_back({eps, beta_of_z(problem, z, rank_tol_scale)});
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

}  // namespace anderson
