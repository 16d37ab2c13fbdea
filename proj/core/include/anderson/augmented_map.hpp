#pragma once

#include <optional>
#include <span>
#include <vector>

#include "anderson/linalg.hpp"
#include "anderson/problems.hpp"

namespace anderson {

/// Stacked iterates z = (z_{m+1}, z_m, ..., z_1), newest first, each block of length n.
struct AugmentedState {
  Vector stacked;
  Index n = 0;

  AugmentedState() = default;
  /// Throws Error(InvalidArgument) unless stacked.size() = n(m+1) with m >= 1.
  AugmentedState(Vector stacked, Index n);

  /// Builds z from blocks given newest first.
  static AugmentedState from_blocks(std::span<const Vector> newest_first);
  /// z = (x, x, ..., x) with m+1 copies.
  static AugmentedState repeated(const Vector& x, Index m);

  Index window() const { return stacked.size() / n - 1; }
  /// Block i, with i = 0 the newest (z_{m+1}) and i = m the oldest (z_1).
  Eigen::VectorBlock<const Vector> block(Index i) const { return stacked.segment(i * n, n); }
};

struct Direction : AugmentedState {
  bool unit_norm = false;

  Direction() = default;
  Direction(Vector stacked, Index n) : AugmentedState(std::move(stacked), n) {}
  static Direction from_blocks(std::span<const Vector> newest_first);
  /// Normalizes stacked to unit 2-norm. Throws Error(InvalidArgument) for d = 0.
  static Direction unit(Vector stacked, Index n);
};

/// D(z): column i-1 is z_{m+1} - block i, i.e. columns z_{m+1} - z_j for j = m, ..., 1.
DenseMatrix build_D(const AugmentedState& z);
/// R(z): the same differences applied to residuals r(z_j).
DenseMatrix build_R(const FixedPointProblem& problem, const AugmentedState& z);
/// Q(z): the same differences applied to q(z_j).
DenseMatrix build_Q(const FixedPointProblem& problem, const AugmentedState& z);

/// beta(z) = -pinv(R(z)) r(z_{m+1}), minimum norm.
Vector beta_of_z(const FixedPointProblem& problem, const AugmentedState& z,
                 double rank_tol_scale = 1.0);

/// Psi(z) = (q(z_{m+1}) + Q(z) beta(z), z_{m+1}, ..., z_2).
AugmentedState psi_apply(const FixedPointProblem& problem, const AugmentedState& z,
                         double rank_tol_scale = 1.0);

/// z* = (x*, ..., x*). Throws Error(InvalidProblem) if x* is unknown.
AugmentedState fixed_point_state(const FixedPointProblem& problem, Index m);

/// M = q'(x*) and A = I - M.
struct Linearization {
  DenseMatrix M;
  DenseMatrix A;
};

/// Throws Error(MissingJacobian) without a jacobian, Error(InvalidProblem) without x*,
/// and Error(SingularA) if A is numerically singular.
Linearization linearize_at_fixed_point(const FixedPointProblem& problem);
Linearization linearization_from_M(const DenseMatrix& M);

/// beta_hat(d) = -pinv(A D(d)) A d_{m+1}.
Vector beta_hat(const DenseMatrix& A, const Direction& d, double rank_tol_scale = 1.0);

struct DirectionalDerivativeResult {
  Vector value;
  Vector beta_hat;
  bool formula_rank_ok = false;  ///< D(d) has full numerical column rank
};

/// Directional derivative of Psi at z* in direction d.
DirectionalDerivativeResult directional_derivative(const Linearization& lin, const Direction& d,
                                                   double rank_tol_scale = 1.0);

/// Block matrix with first block row [(1 + sum b) M, -b_1 M, ..., -b_m M] and identity
/// blocks on the subdiagonal; applying it to d gives the directional derivative.
DenseMatrix directional_derivative_matrix(const DenseMatrix& M, const Vector& beta_hat);

/// One-sided difference quotients (Psi(z* + h d) - z*) / h, one per h.
std::vector<Vector> directional_derivative_fd(const FixedPointProblem& problem, const Direction& d,
                                              std::span<const double> h_values,
                                              double rank_tol_scale = 1.0);

/// (||A^-1|| ||A|| + 1) ||I - A|| + 1. The same constant bounds Psi at any z with
/// z_{m+1} = x* and R(z) rank-deficient, for every window m.
double lipschitz_bound_linear_m1(const DenseMatrix& A);

/// sigma_min(I - q'(x*)).
double default_c_r(const FixedPointProblem& problem);

/// 3 + (4 + 4/c_r) ||I - q'(x*)||. c_r defaults to default_c_r(problem).
double lipschitz_bound_nonlinear_m1(const FixedPointProblem& problem,
                                    std::optional<double> c_r = std::nullopt);

struct BetaProbeRow {
  double eps = 0.0;
  Vector beta;
};

struct BetaProbeTable {
  Vector direction;
  std::vector<BetaProbeRow> rows;
};

/// Tabulates beta(z0 + eps * e) for each direction e and each eps.
std::vector<BetaProbeTable> discontinuity_probe_beta(const FixedPointProblem& problem,
                                                     const AugmentedState& z0,
                                                     std::span<const Vector> directions,
                                                     std::span<const double> eps_values,
                                                     double rank_tol_scale = 1.0);

}  // namespace anderson
