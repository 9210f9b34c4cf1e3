#include "collonet/rbf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "collonet/error.hpp"

namespace collonet {

namespace {

void check_point(const BoundarySet& boundary, std::span<const double> x) {
  if (x.size() != boundary.dim()) {
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                ", boundary is " + std::to_string(boundary.dim()) + "-D");
  }
}

void check_coefficients(const BoundarySet& boundary, std::span<const double> q) {
  if (q.size() != boundary.size()) {
    throw std::invalid_argument("coefficient vector length " + std::to_string(q.size()) +
                                " does not match " + std::to_string(boundary.size()) +
                                " boundary points");
  }
}

}  // namespace

BoundarySet::BoundarySet(PointCloud points, std::vector<double> values, double lambda)
    : points_(std::move(points)), values_(std::move(values)), lambda_(lambda) {
  if (points_.empty()) throw std::invalid_argument("boundary needs at least one point");
  if (values_.size() != points_.size()) {
    throw std::invalid_argument("boundary has " + std::to_string(points_.size()) +
                                " points but " + std::to_string(values_.size()) + " values");
  }
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  for (double b : values_) {
    if (!std::isfinite(b)) throw std::invalid_argument("boundary value is not finite");
  }
  if (points_.size() >= 2) {
    const auto pair = closest_pair(points_);
    if (pair.distance <= kDuplicateTolerance) {
      throw DegenerateGeometryError(pair.first, pair.second, pair.distance);
    }
  }
  points_.set_tag(PointTag::boundary);
}

BoundarySet BoundarySet::with_selected_lambda(PointCloud points, std::vector<double> values) {
  const double lambda = select_lambda(points);
  return {std::move(points), std::move(values), lambda};
}

void CholeskyFactor::solve_in_place(Eigen::Ref<Eigen::MatrixXd> rhs) const {
  if (static_cast<std::size_t>(rhs.rows()) != size()) {
    throw std::invalid_argument("right-hand side has " + std::to_string(rhs.rows()) +
                                " rows, factor is " + std::to_string(size()) + "×" +
                                std::to_string(size()));
  }
  const auto l = lower_.triangularView<Eigen::Lower>();
  l.solveInPlace(rhs);
  l.transpose().solveInPlace(rhs);
}

Eigen::MatrixXd build_interpolation_matrix(const BoundarySet& boundary) {
  const auto m = static_cast<Eigen::Index>(boundary.size());
  const auto& pts = boundary.points();
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = std::exp(-boundary.lambda() *
                                squared_distance(pts[static_cast<std::size_t>(i)],
                                                 pts[static_cast<std::size_t>(j)]));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

CholeskyFactor cholesky_factorize(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("Cholesky needs a square matrix");
  const Eigen::Index m = a.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double pivot = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) throw SingularMatrixError(static_cast<std::size_t>(j), pivot);
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < m; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

CholeskyFactor factorize_boundary(const BoundarySet& boundary) {
  auto f = cholesky_factorize(build_interpolation_matrix(boundary));
  return CholeskyFactor(f.lower(), CholeskyFactor::Provenance{boundary.lambda(), boundary.size()});
}

Eigen::VectorXd solve_coefficients(const CholeskyFactor& factor, const Eigen::VectorXd& c) {
  if (static_cast<std::size_t>(c.size()) != factor.size()) {
    throw std::invalid_argument("right-hand side length " + std::to_string(c.size()) +
                                " does not match matrix size " + std::to_string(factor.size()));
  }
  Eigen::VectorXd q = c;
  factor.solve_in_place(q);
  return q;
}

double rbf_eval(std::span<const double> q, const BoundarySet& boundary,
                std::span<const double> x) {
  check_point(boundary, x);
  check_coefficients(boundary, q);
  const auto& pts = boundary.points();
  double out = 0.0;
  for (std::size_t l = 0; l < boundary.size(); ++l) {
    out += q[l] * std::exp(-boundary.lambda() * squared_distance(x, pts[l]));
  }
  return out;
}

double rbf_laplacian(std::span<const double> q, const BoundarySet& boundary,
                     std::span<const double> x) {
  check_point(boundary, x);
  check_coefficients(boundary, q);
  const double lam = boundary.lambda();
  const double n = static_cast<double>(boundary.dim());
  const auto& pts = boundary.points();
  double out = 0.0;
  for (std::size_t l = 0; l < boundary.size(); ++l) {
    const double d2 = squared_distance(x, pts[l]);
    out += q[l] * (4.0 * lam * lam * d2 - 2.0 * n * lam) * std::exp(-lam * d2);
  }
  return out;
}

Eigen::MatrixXd rbf_laplacian_matrix(const BoundarySet& boundary, const PointCloud& points) {
  if (points.dim() != boundary.dim()) {
    throw std::invalid_argument("collocation points and boundary differ in dimension");
  }
  const double lam = boundary.lambda();
  const double n = static_cast<double>(boundary.dim());
  const auto& centers = boundary.points();
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(points.size()),
                      static_cast<Eigen::Index>(boundary.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t l = 0; l < boundary.size(); ++l) {
      const double d2 = squared_distance(points[i], centers[l]);
      phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
          (4.0 * lam * lam * d2 - 2.0 * n * lam) * std::exp(-lam * d2);
    }
  }
  return phi;
}

Eigen::MatrixXd coefficient_param_jacobian(const CholeskyFactor& factor,
                                           const Eigen::MatrixXd& boundary_mlp_grads) {
  if (static_cast<std::size_t>(boundary_mlp_grads.rows()) != factor.size()) {
    throw std::invalid_argument("gradient matrix has " +
                                std::to_string(boundary_mlp_grads.rows()) +
                                " rows, expected one per boundary point (" +
                                std::to_string(factor.size()) + ")");
  }
  Eigen::MatrixXd jac = -boundary_mlp_grads;
  factor.solve_in_place(jac);
  return jac;
}

}  // namespace collonet
