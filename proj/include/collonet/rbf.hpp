#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "collonet/geometry.hpp"

namespace collonet {

/// Boundary points R_i with Dirichlet values b_i and the shared Gaussian
/// width λ. Points must be pairwise farther apart than kDuplicateTolerance.
class BoundarySet {
public:
  BoundarySet(PointCloud points, std::vector<double> values, double lambda);

  /// λ from select_lambda(points).
  static BoundarySet with_selected_lambda(PointCloud points, std::vector<double> values);

  const PointCloud& points() const noexcept { return points_; }
  std::span<const double> values() const noexcept { return values_; }
  double lambda() const noexcept { return lambda_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dim() const noexcept { return points_.dim(); }

private:
  PointCloud points_;
  std::vector<double> values_;
  double lambda_;
};

/// A = L·Lᵀ with L lower triangular.
class CholeskyFactor {
public:
  struct Provenance {
    double lambda;
    std::size_t point_count;
  };

  CholeskyFactor(Eigen::MatrixXd lower, std::optional<Provenance> provenance = std::nullopt)
      : lower_(std::move(lower)), provenance_(provenance) {}

  const Eigen::MatrixXd& lower() const noexcept { return lower_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(lower_.rows()); }
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }

  /// Solves A·X = B in place for any number of right-hand-side columns.
  void solve_in_place(Eigen::Ref<Eigen::MatrixXd> rhs) const;

private:
  Eigen::MatrixXd lower_;
  std::optional<Provenance> provenance_;
};

/// A_ij = exp(-λ|R_i - R_j|²).
Eigen::MatrixXd build_interpolation_matrix(const BoundarySet& boundary);

/// Throws SingularMatrixError on a non-positive pivot.
CholeskyFactor cholesky_factorize(const Eigen::MatrixXd& a);

/// Factorizes the interpolation matrix of `boundary` and records its provenance.
CholeskyFactor factorize_boundary(const BoundarySet& boundary);

Eigen::VectorXd solve_coefficients(const CholeskyFactor& factor, const Eigen::VectorXd& c);

double rbf_eval(std::span<const double> q, const BoundarySet& boundary,
                std::span<const double> x);

/// Σ_l q_l (4λ²|x-R_l|² - 2nλ) exp(-λ|x-R_l|²).
double rbf_laplacian(std::span<const double> q, const BoundarySet& boundary,
                     std::span<const double> x);

/// Row i, column l: ∇² of the l-th unit Gaussian at points[i]. Multiplying by q
/// gives rbf_laplacian at every point.
Eigen::MatrixXd rbf_laplacian_matrix(const BoundarySet& boundary, const PointCloud& points);

/// ∂q/∂p = -A⁻¹ G, with G (M×P) holding ∂N(R_i)/∂p in its rows.
Eigen::MatrixXd coefficient_param_jacobian(const CholeskyFactor& factor,
                                           const Eigen::MatrixXd& boundary_mlp_grads);

}  // namespace collonet
