#include "collonet/optim.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "collonet/error.hpp"

namespace collonet {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

Eigen::VectorXd Box::project(const Eigen::VectorXd& x) const {
  return x.cwiseMax(lo).cwiseMin(hi);
}

bool Box::contains(const Eigen::VectorXd& x) const {
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

Box mlp_box(const MlpParams& shape, double lo, double hi) {
  const auto p = static_cast<Eigen::Index>(shape.param_count());
  const auto free = static_cast<Eigen::Index>(shape.hidden_count());
  constexpr double inf = std::numeric_limits<double>::infinity();
  Box box{Eigen::VectorXd::Constant(p, lo), Eigen::VectorXd::Constant(p, hi)};
  box.lo.head(free).setConstant(-inf);
  box.hi.head(free).setConstant(inf);
  return box;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::budget: return "budget";
    case Termination::line_search_failure: return "line-search-failure";
  }
  return "unknown";
}

MinimizeResult bfgs_minimize(const Objective& objective, const Eigen::VectorXd& x0,
                             const std::optional<Box>& box, const BfgsOptions& options) {
  const auto start = Clock::now();
  const Eigen::Index n = x0.size();
  if (box && (box->lo.size() != n || box->hi.size() != n)) {
    throw std::invalid_argument("box dimension does not match the starting point");
  }
  auto project = [&](const Eigen::VectorXd& x) { return box ? box->project(x) : x; };

  PhaseReport report;
  Eigen::VectorXd x = project(x0);
  auto current = objective(x);
  ++report.evaluations;
  if (!std::isfinite(current.value) || !all_finite(current.gradient)) {
    throw InvalidStartError("objective is not finite at the starting point");
  }
  report.initial_error = current.value;
  report.trajectory.push_back(current.value);

  auto projected_gradient = [&](const Eigen::VectorXd& at, const Eigen::VectorXd& g) {
    return Eigen::VectorXd(at - project(at - g));
  };
  auto active = [&](Eigen::Index i, const Eigen::VectorXd& at, const Eigen::VectorXd& g) {
    return box && ((at[i] <= box->lo[i] && g[i] > 0.0) || (at[i] >= box->hi[i] && g[i] < 0.0));
  };

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool rescale = true;
  report.reason = Termination::budget;

  for (;;) {
    const double pg_norm = projected_gradient(x, current.gradient).cwiseAbs().maxCoeff();
    report.projected_grad_norm = pg_norm;
    if (pg_norm <= options.grad_tol) {
      report.reason = Termination::converged;
      break;
    }
    if (report.iterations >= options.max_iters) break;

    Eigen::VectorXd d = -(h * current.gradient);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (active(i, x, current.gradient)) d[i] = 0.0;
    }
    if (!(current.gradient.dot(d) < 0.0)) {
      h.setIdentity();
      rescale = true;
      d = -current.gradient;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (active(i, x, current.gradient)) d[i] = 0.0;
      }
    }

    double alpha = 1.0;
    bool accepted = false;
    bool saw_finite = false;
    Eigen::VectorXd trial_x;
    ErrorValue trial;
    for (int k = 0; k < options.max_backtracks; ++k, alpha *= options.shrink) {
      trial_x = project(x + alpha * d);
      trial = objective(trial_x);
      ++report.evaluations;
      if (!std::isfinite(trial.value) || !all_finite(trial.gradient)) continue;
      saw_finite = true;
      const double decrease = current.gradient.dot(trial_x - x);
      if (trial.value <= current.value && trial.value <= current.value + options.armijo_c1 * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!saw_finite) {
        throw NumericalError("line search exhausted: objective non-finite at every trial step");
      }
      report.reason = Termination::line_search_failure;
      break;
    }

    const Eigen::VectorXd s = trial_x - x;
    if (s.cwiseAbs().maxCoeff() == 0.0) {
      report.reason = Termination::line_search_failure;
      break;
    }
    const Eigen::VectorXd y = trial.gradient - current.gradient;
    x = std::move(trial_x);
    current = std::move(trial);
    ++report.iterations;
    report.trajectory.push_back(current.value);

    const double sy = s.dot(y);
    if (sy <= 1e-12 * s.norm() * y.norm()) {
      h.setIdentity();
      rescale = true;
      continue;
    }
    if (rescale) {
      h = Eigen::MatrixXd::Identity(n, n) * (sy / y.squaredNorm());
      rescale = false;
    }
    // H ← (I - ρ s yᵀ) H (I - ρ y sᵀ) + ρ s sᵀ
    const double rho = 1.0 / sy;
    const Eigen::VectorXd hy = h * y;
    const double yhy = y.dot(hy);
    h.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
    h.noalias() -= rho * (hy * s.transpose() + s * hy.transpose());
  }

  report.final_error = current.value;
  report.wall_seconds = seconds_since(start);
  return {std::move(x), std::move(report)};
}

void TrainConfig::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(box_lo < box_hi)) throw std::invalid_argument("box_lo must be below box_hi");
  if (max_iters_penalty < 1 || max_iters_synergy < 1) {
    throw std::invalid_argument("iteration budgets must be at least 1");
  }
  if (!(grad_tol >= 0.0)) throw std::invalid_argument("grad_tol must be non-negative");
}

TrainResult two_phase_train(const ProblemSpec& problem, std::size_t hidden_count,
                            const TrainConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const std::size_t dim = problem.dimension();
  const auto init = MlpParams::random(hidden_count, dim, config.seed);
  const Box box = mlp_box(init, config.box_lo, config.box_hi);

  TrainReport report;
  report.hidden_count = hidden_count;

  const Objective penalty = [&](const Eigen::VectorXd& p) {
    return penalty_error(MlpParams::from_flat(hidden_count, dim, p), problem, config.eta);
  };
  auto phase1 = bfgs_minimize(penalty, init.flatten(), box,
                              {.max_iters = config.max_iters_penalty, .grad_tol = config.grad_tol});
  report.penalty = std::move(phase1.report);
  const auto penalty_params = MlpParams::from_flat(hidden_count, dim, phase1.x);
  const auto split = penalty_error_terms(penalty_params, problem, config.eta);
  report.penalty_interior_error = split.interior;
  report.penalty_boundary_error = split.boundary;

  std::optional<SynergyObjective> synergy;
  try {
    synergy.emplace(problem);
  } catch (const SingularMatrixError& e) {
    const auto pair = closest_pair(problem.boundary().points());
    throw NumericalError("synergy phase cannot start: " + std::string(e.what()) +
                         " [lambda=" + std::to_string(problem.boundary().lambda()) +
                         ", min boundary distance a=" + std::to_string(pair.distance) +
                         ", 1/a^2=" + std::to_string(1.0 / (pair.distance * pair.distance)) + "]");
  }
  const Objective synergy_objective = [&](const Eigen::VectorXd& p) {
    auto r = synergy->evaluate(MlpParams::from_flat(hidden_count, dim, p));
    return ErrorValue{r.value, std::move(r.gradient)};
  };
  auto phase2 = bfgs_minimize(synergy_objective, phase1.x, box,
                              {.max_iters = config.max_iters_synergy, .grad_tol = config.grad_tol});
  report.synergy = std::move(phase2.report);

  auto solution = refresh_coefficients(
      TrialSolution(MlpParams::from_flat(hidden_count, dim, phase2.x), problem.boundary()),
      synergy->factor());
  report.wall_seconds = seconds_since(start);
  return {std::move(solution), std::move(report)};
}

}  // namespace collonet
