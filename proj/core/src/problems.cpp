#include "anderson/problems.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "anderson/error.hpp"

namespace anderson {

namespace {

constexpr double kSingularityThreshold = 1e-12;

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> values;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, "not a number: '" + item + "'");
    }
  }
  return values;
}

}  // namespace

FixedPointProblem make_affine(AffineSpec spec, std::string label) {
  const Index n = spec.M.rows();
  if (n == 0 || spec.M.cols() != n || spec.b.size() != n) {
    throw Error(ErrorKind::InvalidProblem, "affine problem needs square M and matching b");
  }
  if (!all_finite(spec.M) || !all_finite(spec.b)) {
    throw Error(ErrorKind::NonFinite, "affine problem has non-finite entries");
  }
  if (spec.M.isZero(0.0)) {
    throw Error(ErrorKind::InvalidProblem, "M = 0 is the trivial case and is excluded");
  }
  const DenseMatrix A = DenseMatrix::Identity(n, n) - spec.M;
  if (min_singular_value(A) <= kSingularityThreshold) {
    throw Error(ErrorKind::SingularA, "I - M is numerically singular");
  }

  FixedPointProblem p;
  p.dim = n;
  p.label = std::move(label);
  p.known_fixed_point = Vector(A.colPivHouseholderQr().solve(spec.b));
  const DenseMatrix M = spec.M;
  const Vector b = spec.b;
  p.q = [M, b](const Vector& x) -> Vector { return M * x + b; };
  p.jacobian = [M](const Vector&) -> DenseMatrix { return M; };
  p.affine = std::move(spec);
  return p;
}

FixedPointProblem problem_linear_2x2() {
  DenseMatrix M(2, 2);
  M << 2.0 / 3.0, 0.25,
       0.0, 1.0 / 3.0;
  return make_affine({M, Vector::Zero(2)}, "linear2x2");
}

FixedPointProblem problem_nonlinear_2x2() {
  FixedPointProblem p;
  p.dim = 2;
  p.label = "nonlinear2x2";
  p.q = [](const Vector& x) -> Vector {
    Vector y(2);
    y(0) = 0.5 * (x(0) + x(0) * x(0) + x(1) * x(1));
    y(1) = 0.5 * (x(1) + x(0) * x(0));
    return y;
  };
  p.jacobian = [](const Vector& x) -> DenseMatrix {
    DenseMatrix J(2, 2);
    J << x(0) + 0.5, x(1),
         x(0), 0.5;
    return J;
  };
  p.known_fixed_point = Vector::Zero(2);
  return p;
}

FixedPointProblem problem_linear_200(double l2, double l3, double l4) {
  for (double l : {l2, l3, l4}) {
    if (!(std::abs(l) < 1.0)) {
      throw Error(ErrorKind::InvalidProblem, "linear200 eigenvalues must satisfy |l| < 1");
    }
  }
  constexpr Index n = 200;
  constexpr Index cluster = 196;
  Vector diag(n);
  diag.head(4) << 0.9, l2, l3, l4;
  diag.tail(cluster) = Vector::LinSpaced(cluster, 0.29325, 0.03);

  DenseMatrix M = diag.asDiagonal();
  M(0, 1) = 1.0;

  std::ostringstream label;
  label << "linear200:" << l2 << "," << l3 << "," << l4;
  return make_affine({M, Vector::Zero(n)}, label.str());
}

FixedPointProblem problem_scalar() {
  FixedPointProblem p;
  p.dim = 1;
  p.label = "scalar";
  p.q = [](const Vector& x) -> Vector {
    if (x(0) == 0.0) throw Error(ErrorKind::EvalError, "scalar problem: q(0) is undefined");
    Vector y(1);
    y(0) = 1.0 + 1.0 / x(0);
    return y;
  };
  p.jacobian = [](const Vector& x) -> DenseMatrix {
    if (x(0) == 0.0) throw Error(ErrorKind::EvalError, "scalar problem: q'(0) is undefined");
    DenseMatrix J(1, 1);
    J(0, 0) = -1.0 / (x(0) * x(0));
    return J;
  };
  Vector xs(1);
  xs(0) = 0.5 * (1.0 + std::sqrt(5.0));
  p.known_fixed_point = xs;
  return p;
}

AffineSpec parse_affine_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidProblem, std::string("affine JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("M") || !doc.contains("b")) {
    throw Error(ErrorKind::InvalidProblem, "affine JSON needs keys \"M\" and \"b\"");
  }
  try {
    const auto rows = doc.at("M").get<std::vector<std::vector<double>>>();
    const auto b = doc.at("b").get<std::vector<double>>();
    const Index n = static_cast<Index>(rows.size());
    AffineSpec spec{DenseMatrix(n, n), Vector(static_cast<Index>(b.size()))};
    for (Index i = 0; i < n; ++i) {
      if (static_cast<Index>(rows[i].size()) != n) {
        throw Error(ErrorKind::InvalidProblem, "affine JSON: M must be square");
      }
      for (Index j = 0; j < n; ++j) spec.M(i, j) = rows[i][j];
    }
    for (Index i = 0; i < spec.b.size(); ++i) spec.b(i) = b[i];
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidProblem, std::string("affine JSON: ") + e.what());
  }
}

AffineSpec load_affine_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_affine_json(buf.str());
}

FixedPointProblem problem_from_id(std::string_view id) {
  if (id == "linear2x2") return problem_linear_2x2();
  if (id == "nonlinear2x2") return problem_nonlinear_2x2();
  if (id == "scalar") return problem_scalar();
  if (id == "linear200") return problem_linear_200(-0.3, 0.3, -0.3);

  constexpr std::string_view linear200_prefix = "linear200:";
  if (id.starts_with(linear200_prefix)) {
    const auto values = parse_number_list(id.substr(linear200_prefix.size()));
    if (values.size() != 3) {
      throw Error(ErrorKind::ConfigError, "linear200 expects three eigenvalues l2,l3,l4");
    }
    try {
      return problem_linear_200(values[0], values[1], values[2]);
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigError, e.what());
    }
  }

  constexpr std::string_view affine_prefix = "affine:";
  if (id.starts_with(affine_prefix)) {
    const std::filesystem::path file{std::string(id.substr(affine_prefix.size()))};
    try {
      return make_affine(load_affine_json(file), std::string(id));
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigError, e.what());
    }
  }
  throw Error(ErrorKind::ConfigError, "unknown problem id '" + std::string(id) + "'");
}

DenseMatrix finite_difference_jacobian(const FixedPointProblem& problem, const Vector& x,
                                       double h) {
  DenseMatrix J(problem.dim, problem.dim);
  for (Index j = 0; j < problem.dim; ++j) {
    Vector xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    J.col(j) = (problem.q(xp) - problem.q(xm)) / (2.0 * h);
  }
  return J;
}

}  // namespace anderson
