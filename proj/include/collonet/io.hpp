#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "collonet/optim.hpp"
#include "collonet/problems.hpp"

namespace collonet {

/// solution.json: architecture, flat p, q, λ, boundary points and values.
nlohmann::json solution_to_json(const TrialSolution& sol, const std::string& problem_name);
TrialSolution solution_from_json(const nlohmann::json& j);

nlohmann::json phase_to_json(const PhaseReport& phase);

struct ReportContext {
  std::string problem_name;
  std::size_t boundary_count = 0;
  std::size_t interior_count = 0;
  double lambda = 0.0;
  TrainConfig config;
  std::vector<std::string> notes;
  double boundary_max_abs_error = 0.0;
};

/// report.json. The accuracy summary is included when `accuracy` is non-null.
nlohmann::json report_to_json(const TrainReport& report, const ReportContext& ctx,
                              const AccuracyReport* accuracy);

/// Header `x1,..,xn,psi_m,psi_a,abs_err`, one row per grid point.
void write_accuracy_csv(std::ostream& out, const AccuracyReport& acc);

/// Header `x1,..,xn,psi_m`.
void write_values_csv(std::ostream& out, const PointCloud& points, const std::vector<double>& values);

}  // namespace collonet
