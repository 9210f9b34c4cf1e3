#include "collonet/pde.hpp"

#include <stdexcept>
#include <string>

#include "collonet/parallel.hpp"

namespace collonet {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_params(const MlpParams& params, const ProblemSpec& problem) {
  if (params.input_dim() != problem.dimension()) {
    throw std::invalid_argument("network input dimension " + std::to_string(params.input_dim()) +
                                " does not match problem dimension " +
                                std::to_string(problem.dimension()));
  }
}

// Per-point values and parameter-gradient rows, filled point by point.
struct PointTerms {
  Eigen::VectorXd values;
  RowMatrix grads;
};

PointTerms interior_terms(const MlpParams& params, const PointCloud& points) {
  const std::size_t p = params.param_count();
  PointTerms t{Eigen::VectorXd(static_cast<Eigen::Index>(points.size())),
               RowMatrix(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(p))};
  parallel_for(points.size(), [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    t.values[row] = mlp_laplacian_with_gradient(params, points[i], {t.grads.row(row).data(), p});
  });
  return t;
}

PointTerms boundary_terms(const MlpParams& params, const PointCloud& points) {
  const std::size_t p = params.param_count();
  PointTerms t{Eigen::VectorXd(static_cast<Eigen::Index>(points.size())),
               RowMatrix(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(p))};
  parallel_for(points.size(), [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    t.values[row] = mlp_eval_with_gradient(params, points[i], {t.grads.row(row).data(), p});
  });
  return t;
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> s) {
  return {s.data(), static_cast<Eigen::Index>(s.size())};
}

double sum_of_squares(const Eigen::VectorXd& r) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) acc += r[i] * r[i];
  return acc;
}

}  // namespace

CollocationGrid::CollocationGrid(PointCloud points, const ScalarField& source)
    : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("collocation grid needs at least one point");
  points_.set_tag(PointTag::interior);
  source_values_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) source_values_.push_back(source(points_[i]));
}

ProblemSpec::ProblemSpec(std::size_t dimension, Operator op, ScalarField source,
                         BoundarySet boundary, PointCloud interior,
                         std::optional<ScalarField> analytic_solution)
    : dimension_(dimension), op_(op), source_(std::move(source)), boundary_(std::move(boundary)),
      interior_(std::move(interior), source_), analytic_(std::move(analytic_solution)) {
  if (boundary_.dim() != dimension_ || interior_.points().dim() != dimension_) {
    throw std::invalid_argument("boundary and interior points must both be " +
                                std::to_string(dimension_) + "-D");
  }
}

TrialSolution::TrialSolution(MlpParams params, BoundarySet boundary)
    : params_(std::move(params)), boundary_(std::move(boundary)),
      q_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(boundary_.size()))),
      mode_(TrialMode::penalty) {
  if (params_.input_dim() != boundary_.dim()) {
    throw std::invalid_argument("network and boundary dimensions differ");
  }
}

TrialSolution::TrialSolution(MlpParams params, BoundarySet boundary, Eigen::VectorXd q)
    : params_(std::move(params)), boundary_(std::move(boundary)), q_(std::move(q)),
      mode_(TrialMode::synergy) {
  if (params_.input_dim() != boundary_.dim()) {
    throw std::invalid_argument("network and boundary dimensions differ");
  }
  if (static_cast<std::size_t>(q_.size()) != boundary_.size()) {
    throw std::invalid_argument("coefficient count does not match boundary size");
  }
}

double trial_eval(const TrialSolution& sol, std::span<const double> x) {
  const double n = mlp_eval(sol.params(), x);
  if (sol.mode() == TrialMode::penalty) return n;
  const auto& q = sol.coefficients();
  return n + rbf_eval({q.data(), static_cast<std::size_t>(q.size())}, sol.boundary(), x);
}

double trial_laplacian(const TrialSolution& sol, std::span<const double> x) {
  const double n = mlp_laplacian(sol.params(), x);
  if (sol.mode() == TrialMode::penalty) return n;
  const auto& q = sol.coefficients();
  return n + rbf_laplacian({q.data(), static_cast<std::size_t>(q.size())}, sol.boundary(), x);
}

TrialSolution refresh_coefficients(const TrialSolution& sol) {
  return refresh_coefficients(sol, factorize_boundary(sol.boundary()));
}

TrialSolution refresh_coefficients(const TrialSolution& sol, const CholeskyFactor& factor) {
  const auto& b = sol.boundary();
  Eigen::VectorXd c(static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) {
    c[static_cast<Eigen::Index>(i)] = b.values()[i] - mlp_eval(sol.params(), b.points()[i]);
  }
  return {sol.params(), b, solve_coefficients(factor, c)};
}

double residual(const TrialSolution& sol, const ProblemSpec& problem, std::span<const double> r) {
  switch (problem.op()) {
    case Operator::laplacian:
      return trial_laplacian(sol, r) - problem.source()(r);
  }
  throw std::logic_error("unhandled operator");
}

PenaltyBreakdown penalty_error_terms(const MlpParams& params, const ProblemSpec& problem,
                                     double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("penalty factor must be positive");
  check_params(params, problem);
  const auto inner = interior_terms(params, problem.interior().points());
  const auto outer = boundary_terms(params, problem.boundary().points());

  const Eigen::VectorXd res = inner.values - as_vector(problem.interior().source_values());
  const Eigen::VectorXd mismatch = outer.values - as_vector(problem.boundary().values());

  PenaltyBreakdown out;
  out.interior = sum_of_squares(res);
  out.boundary = sum_of_squares(mismatch);
  out.value = out.interior + eta * out.boundary;
  out.gradient = inner.grads.transpose() * (2.0 * res) +
                 eta * (outer.grads.transpose() * (2.0 * mismatch));
  return out;
}

ErrorValue penalty_error(const MlpParams& params, const ProblemSpec& problem, double eta) {
  auto t = penalty_error_terms(params, problem, eta);
  return {t.value, std::move(t.gradient)};
}

SynergyObjective::SynergyObjective(const ProblemSpec& problem)
    : problem_(problem), factor_(factorize_boundary(problem.boundary())),
      laplacian_table_(rbf_laplacian_matrix(problem.boundary(), problem.interior().points())) {}

SynergyObjective::Result SynergyObjective::evaluate(const MlpParams& params) const {
  check_params(params, problem_);
  const auto inner = interior_terms(params, problem_.interior().points());
  const auto outer = boundary_terms(params, problem_.boundary().points());

  const Eigen::VectorXd c = as_vector(problem_.boundary().values()) - outer.values;
  Eigen::VectorXd q = solve_coefficients(factor_, c);

  const Eigen::VectorXd res =
      inner.values + laplacian_table_ * q - as_vector(problem_.interior().source_values());
  const Eigen::VectorXd weights = 2.0 * res;

  // d/dp Σ res² = Σ 2 res_i [∂∇²N(r_i)/∂p + Σ_l ∇²g_l(r_i) ∂q_l/∂p]
  const Eigen::MatrixXd jac = coefficient_param_jacobian(factor_, outer.grads);
  Eigen::VectorXd gradient = inner.grads.transpose() * weights;
  gradient += jac.transpose() * (laplacian_table_.transpose() * weights);

  return {sum_of_squares(res), std::move(gradient), std::move(q)};
}

ErrorValue synergy_error(const MlpParams& params, const ProblemSpec& problem) {
  const SynergyObjective objective(problem);
  auto r = objective.evaluate(params);
  return {r.value, std::move(r.gradient)};
}

}  // namespace collonet
