#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "anderson/linalg.hpp"

namespace anderson {

using FixedPointMap = std::function<Vector(const Vector&)>;
using JacobianMap = std::function<DenseMatrix(const Vector&)>;

/// q(x) = M x + b.
struct AffineSpec {
  DenseMatrix M;
  Vector b;
};

/// Evaluator bundle for a fixed-point iteration x_{k+1} = q(x_k).
///
/// The evaluators must be pure and re-entrant: sweeps call them concurrently.
struct FixedPointProblem {
  Index dim = 0;
  FixedPointMap q;
  std::optional<JacobianMap> jacobian;
  std::optional<Vector> known_fixed_point;
  std::string label;
  /// Present when q is affine; GMRES and the linear Lipschitz bound need it.
  std::optional<AffineSpec> affine;

  /// r(x) = x - q(x)
  Vector residual(const Vector& x) const { return x - q(x); }
};

/// Throws Error(SingularA) if I - M is numerically singular and
/// Error(InvalidProblem) for malformed shapes or M = 0.
FixedPointProblem make_affine(AffineSpec spec, std::string label = "affine");

/// M = [[2/3, 1/4], [0, 1/3]], b = 0.
FixedPointProblem problem_linear_2x2();

/// q(x) = [(x1 + x1^2 + x2^2)/2, (x2 + x1^2)/2], fixed point 0.
FixedPointProblem problem_nonlinear_2x2();

/// 200x200 diagonal M with m_12 = 1. Diagonal: 0.9, l2, l3, l4, then 196 values
/// uniformly spaced from 0.29325 down to 0.03 (both endpoints included).
FixedPointProblem problem_linear_200(double l2, double l3, double l4);

/// q(x) = 1 + 1/x, fixed point (1 + sqrt 5)/2. Evaluating at x = 0 throws EvalError.
FixedPointProblem problem_scalar();

/// Parses {"M": [[...], ...], "b": [...]}. Throws Error(InvalidProblem) on bad input.
AffineSpec parse_affine_json(std::string_view text);
AffineSpec load_affine_json(const std::filesystem::path& path);

/// Resolves a problem id: "linear2x2", "nonlinear2x2", "scalar",
/// "linear200" (defaults l2=-0.3, l3=0.3, l4=-0.3), "linear200:<l2>,<l3>,<l4>",
/// "affine:<file.json>". Unknown ids throw Error(ConfigError).
FixedPointProblem problem_from_id(std::string_view id);

/// Central-difference Jacobian of q at x with step h.
DenseMatrix finite_difference_jacobian(const FixedPointProblem& problem, const Vector& x,
                                       double h = 1e-6);

}  // namespace anderson
