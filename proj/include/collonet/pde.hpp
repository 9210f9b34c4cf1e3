#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "collonet/geometry.hpp"
#include "collonet/mlp.hpp"
#include "collonet/rbf.hpp"

namespace collonet {

using ScalarField = std::function<double(std::span<const double>)>;

/// Differential operator L of L Ψ = f. Only the Laplacian is implemented;
/// new operators add a tag here and a case in the residual assembly.
enum class Operator { laplacian };

/// Interior collocation points r_i with cached source values f(r_i).
class CollocationGrid {
public:
  CollocationGrid(PointCloud points, const ScalarField& source);

  const PointCloud& points() const noexcept { return points_; }
  std::span<const double> source_values() const noexcept { return source_values_; }
  std::size_t size() const noexcept { return points_.size(); }

private:
  PointCloud points_;
  std::vector<double> source_values_;
};

class ProblemSpec {
public:
  ProblemSpec(std::size_t dimension, Operator op, ScalarField source, BoundarySet boundary,
              PointCloud interior, std::optional<ScalarField> analytic_solution = std::nullopt);

  std::size_t dimension() const noexcept { return dimension_; }
  Operator op() const noexcept { return op_; }
  const ScalarField& source() const noexcept { return source_; }
  const BoundarySet& boundary() const noexcept { return boundary_; }
  const CollocationGrid& interior() const noexcept { return interior_; }
  const std::optional<ScalarField>& analytic_solution() const noexcept { return analytic_; }

private:
  std::size_t dimension_;
  Operator op_;
  ScalarField source_;
  BoundarySet boundary_;
  CollocationGrid interior_;
  std::optional<ScalarField> analytic_;
};

enum class TrialMode { penalty, synergy };

/// Ψ_M(x) = N(x) + Σ_l q_l exp(-λ|x - R_l|²). In penalty mode q is zero.
class TrialSolution {
public:
  /// Penalty-mode solution (q = 0).
  TrialSolution(MlpParams params, BoundarySet boundary);
  /// Synergy-mode solution with explicit coefficients.
  TrialSolution(MlpParams params, BoundarySet boundary, Eigen::VectorXd q);

  const MlpParams& params() const noexcept { return params_; }
  const BoundarySet& boundary() const noexcept { return boundary_; }
  const Eigen::VectorXd& coefficients() const noexcept { return q_; }
  TrialMode mode() const noexcept { return mode_; }

private:
  MlpParams params_;
  BoundarySet boundary_;
  Eigen::VectorXd q_;
  TrialMode mode_;
};

double trial_eval(const TrialSolution& sol, std::span<const double> x);
double trial_laplacian(const TrialSolution& sol, std::span<const double> x);

/// Synergy-mode solution whose q solves A q = b - N(R).
TrialSolution refresh_coefficients(const TrialSolution& sol);
TrialSolution refresh_coefficients(const TrialSolution& sol, const CholeskyFactor& factor);

/// L Ψ_M(r) - f(r).
double residual(const TrialSolution& sol, const ProblemSpec& problem, std::span<const double> r);

struct ErrorValue {
  double value;
  Eigen::VectorXd gradient;
};

struct PenaltyBreakdown {
  double value;
  double interior;  // Σ (∇²N(r_i) - f(r_i))²
  double boundary;  // Σ (N(R_i) - b_i)²
  Eigen::VectorXd gradient;
};

/// E = Σ (∇²N(r_i) - f(r_i))² + η Σ (N(R_i) - b_i)².
PenaltyBreakdown penalty_error_terms(const MlpParams& params, const ProblemSpec& problem,
                                     double eta);
ErrorValue penalty_error(const MlpParams& params, const ProblemSpec& problem, double eta);

/// Synergy objective with the boundary factorization and the Gaussian
/// Laplacian table cached; both depend only on the geometry and λ.
class SynergyObjective {
public:
  explicit SynergyObjective(const ProblemSpec& problem);

  struct Result {
    double value;
    Eigen::VectorXd gradient;
    Eigen::VectorXd coefficients;
  };

  Result evaluate(const MlpParams& params) const;
  const CholeskyFactor& factor() const noexcept { return factor_; }
  const ProblemSpec& problem() const noexcept { return problem_; }

private:
  const ProblemSpec& problem_;
  CholeskyFactor factor_;
  Eigen::MatrixXd laplacian_table_;  // K×M
};

/// E = Σ (∇²Ψ_M(r_i) - f(r_i))² with q refreshed from params.
ErrorValue synergy_error(const MlpParams& params, const ProblemSpec& problem);

}  // namespace collonet
