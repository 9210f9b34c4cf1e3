#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "collonet/pde.hpp"

namespace collonet {

/// Per-coordinate box; ±infinity marks an unbounded side.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Eigen::VectorXd project(const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x) const;
};

/// Box that bounds the input weights and biases of an MLP and leaves the
/// output weights free.
Box mlp_box(const MlpParams& shape, double lo, double hi);

enum class Termination { converged, budget, line_search_failure };
std::string to_string(Termination t);

struct BfgsOptions {
  int max_iters = 2000;
  double grad_tol = 1e-6;
  double armijo_c1 = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 40;
};

struct PhaseReport {
  int iterations = 0;
  int evaluations = 0;
  double initial_error = 0.0;
  double final_error = 0.0;
  double projected_grad_norm = 0.0;
  double wall_seconds = 0.0;
  Termination reason = Termination::budget;
  std::vector<double> trajectory;  // objective after each accepted step, starting at x0
};

using Objective = std::function<ErrorValue(const Eigen::VectorXd&)>;

struct MinimizeResult {
  Eigen::VectorXd x;
  PhaseReport report;
};

/// Quasi-Newton minimization with projected Armijo backtracking. Every iterate
/// lies in `box` when one is given.
MinimizeResult bfgs_minimize(const Objective& objective, const Eigen::VectorXd& x0,
                             const std::optional<Box>& box, const BfgsOptions& options = {});

struct TrainConfig {
  double eta = 100.0;
  double box_lo = -20.0;
  double box_hi = 20.0;
  int max_iters_penalty = 2000;
  int max_iters_synergy = 200;
  double grad_tol = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainReport {
  std::size_t hidden_count = 0;
  PhaseReport penalty;
  PhaseReport synergy;
  /// Interior and boundary sums of squares at the end of the penalty phase.
  double penalty_interior_error = 0.0;
  double penalty_boundary_error = 0.0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  TrialSolution solution;
  TrainReport report;
};

/// Penalty phase from a seeded random start, then synergy refinement from the
/// penalty-phase parameters. Returns a synergy-mode solution.
TrainResult two_phase_train(const ProblemSpec& problem, std::size_t hidden_count,
                            const TrainConfig& config);

}  // namespace collonet
