#pragma once

#include <vector>

#include <Eigen/Dense>

namespace anderson {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Outcome of the singular-value rank decision made by min_norm_lstsq.
struct RankInfo {
  Index numerical_rank = 0;
  std::vector<double> singular_values;  // nonincreasing
  double tolerance_used = 0.0;
};

struct LeastSquaresSolution {
  Vector coeffs;
  RankInfo info;
};

/// Minimum-norm minimizer of ||rhs + R * coeffs||_2, i.e. coeffs = -pinv(R) * rhs.
///
/// With rhs = r_k and R the residual-difference matrix this is exactly the
/// Anderson coefficient vector. Singular values at or below
/// rank_tol_scale * max(rows, cols) * eps * sigma_max are treated as zero, so
/// rank-deficient and all-zero R yield the minimum-norm solution (zero for R = 0).
///
/// Throws Error(NonFinite) if R or rhs contain NaN/Inf.
LeastSquaresSolution min_norm_lstsq(const DenseMatrix& R, const Vector& rhs,
                                    double rank_tol_scale = 1.0);

/// Singular-value cutoff used by min_norm_lstsq for a matrix of this shape.
double rank_tolerance(Index rows, Index cols, double sigma_max, double rank_tol_scale = 1.0);

/// Numerical rank under the same cutoff as min_norm_lstsq.
Index numerical_rank(const DenseMatrix& A, double rank_tol_scale = 1.0);

/// max |lambda_i(M)|. Throws NonConvergence if the eigensolver fails.
double spectral_radius(const DenseMatrix& M);

/// Largest singular value.
double operator_norm_2(const DenseMatrix& M);

/// Smallest singular value of a square matrix.
double min_singular_value(const DenseMatrix& M);

bool all_finite(const DenseMatrix& M);
bool all_finite(const Vector& v);

}  // namespace anderson
