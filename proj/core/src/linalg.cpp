#include "anderson/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anderson/error.hpp"

namespace anderson {

bool all_finite(const DenseMatrix& M) { return M.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

double rank_tolerance(Index rows, Index cols, double sigma_max, double rank_tol_scale) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = rank_tol_scale * static_cast<double>(std::max(rows, cols)) * eps * sigma_max;
  // Keep the reported tolerance strictly positive even for the zero matrix.
  return std::max(tol, std::numeric_limits<double>::min());
}

LeastSquaresSolution min_norm_lstsq(const DenseMatrix& R, const Vector& rhs,
                                    double rank_tol_scale) {
  if (rhs.size() != R.rows()) {
    throw Error(ErrorKind::InvalidArgument, "min_norm_lstsq: rhs length does not match R rows");
  }
  if (!all_finite(R) || !all_finite(rhs)) {
    throw Error(ErrorKind::NonFinite, "min_norm_lstsq: non-finite input");
  }

  LeastSquaresSolution out;
  out.coeffs = Vector::Zero(R.cols());
  if (R.cols() == 0 || R.rows() == 0) {
    out.info.tolerance_used = rank_tolerance(R.rows(), R.cols(), 0.0, rank_tol_scale);
    return out;
  }

  Eigen::JacobiSVD<DenseMatrix> svd(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = rank_tolerance(R.rows(), R.cols(), sigma_max, rank_tol_scale);

  out.info.singular_values.assign(sv.data(), sv.data() + sv.size());
  out.info.tolerance_used = tol;

  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  out.info.numerical_rank = rank;
  if (rank == 0) return out;

  const auto U = svd.matrixU().leftCols(rank);
  const auto V = svd.matrixV().leftCols(rank);
  const Vector projected = (U.transpose() * rhs).cwiseQuotient(sv.head(rank));
  out.coeffs = -(V * projected);
  return out;
}

Index numerical_rank(const DenseMatrix& A, double rank_tol_scale) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<DenseMatrix> svd(A);
  const Vector& sv = svd.singularValues();
  const double tol = rank_tolerance(A.rows(), A.cols(), sv(0), rank_tol_scale);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  return rank;
}

double spectral_radius(const DenseMatrix& M) {
  if (M.rows() != M.cols()) {
    throw Error(ErrorKind::InvalidArgument, "spectral_radius: matrix is not square");
  }
  if (!all_finite(M)) throw Error(ErrorKind::NonFinite, "spectral_radius: non-finite input");
  if (M.size() == 0) return 0.0;

  Eigen::EigenSolver<DenseMatrix> solver(M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonConvergence, "spectral_radius: eigensolver did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double operator_norm_2(const DenseMatrix& M) {
  if (!all_finite(M)) throw Error(ErrorKind::NonFinite, "operator_norm_2: non-finite input");
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(M);
  return svd.singularValues()(0);
}

double min_singular_value(const DenseMatrix& M) {
  if (!all_finite(M)) throw Error(ErrorKind::NonFinite, "min_singular_value: non-finite input");
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(M);
  const Vector& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

}  // namespace anderson
