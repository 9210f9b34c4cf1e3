#include "collonet/io.hpp"

#include <ostream>

#include "collonet/format.hpp"
#include "collonet/problem_file.hpp"

namespace collonet {

using nlohmann::json;

namespace {

std::string header(std::size_t dim) {
  std::string h;
  for (std::size_t j = 0; j < dim; ++j) h += "x" + std::to_string(j + 1) + ",";
  return h;
}

void write_point(std::ostream& out, std::span<const double> p) {
  for (double c : p) out << format_double(c) << ',';
}

}  // namespace

json solution_to_json(const TrialSolution& sol, const std::string& problem_name) {
  const auto& params = sol.params();
  const auto& b = sol.boundary();
  const Eigen::VectorXd p = params.flatten();
  json points = json::array();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto r = b.points()[i];
    points.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {
      {"schema", 1},
      {"problem", problem_name},
      {"mode", sol.mode() == TrialMode::synergy ? "synergy" : "penalty"},
      {"dimension", params.input_dim()},
      {"hidden", params.hidden_count()},
      {"params", std::vector<double>(p.data(), p.data() + p.size())},
      {"q", std::vector<double>(sol.coefficients().data(),
                                sol.coefficients().data() + sol.coefficients().size())},
      {"lambda", b.lambda()},
      {"boundary_points", std::move(points)},
      {"boundary_values", std::vector<double>(b.values().begin(), b.values().end())},
  };
}

TrialSolution solution_from_json(const json& j) {
  try {
    if (j.at("schema").get<int>() != 1) throw ConfigError("unsupported solution schema");
    const auto dim = j.at("dimension").get<std::size_t>();
    const auto hidden = j.at("hidden").get<std::size_t>();
    const auto flat = j.at("params").get<std::vector<double>>();
    auto params = MlpParams::from_flat(hidden, dim,
                                       Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size())));
    PointCloud pts(dim, PointTag::boundary);
    for (const auto& row : j.at("boundary_points")) {
      const auto r = row.get<std::vector<double>>();
      if (r.size() != dim) throw ConfigError("boundary point dimension does not match the solution");
      pts.push_back(r);
    }
    BoundarySet boundary(std::move(pts), j.at("boundary_values").get<std::vector<double>>(),
                         j.at("lambda").get<double>());
    if (j.at("mode").get<std::string>() == "penalty") return {std::move(params), std::move(boundary)};
    const auto q = j.at("q").get<std::vector<double>>();
    return {std::move(params), std::move(boundary),
            Eigen::Map<const Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()))};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed solution file: ") + e.what());
  }
}

json phase_to_json(const PhaseReport& phase) {
  return {
      {"iterations", phase.iterations},
      {"evaluations", phase.evaluations},
      {"initial_error", phase.initial_error},
      {"final_error", phase.final_error},
      {"projected_grad_norm", phase.projected_grad_norm},
      {"termination", to_string(phase.reason)},
      {"wall_seconds", phase.wall_seconds},
      {"trajectory", phase.trajectory},
  };
}

json report_to_json(const TrainReport& report, const ReportContext& ctx,
                    const AccuracyReport* accuracy) {
  json penalty = phase_to_json(report.penalty);
  penalty["interior_error"] = report.penalty_interior_error;
  penalty["boundary_error"] = report.penalty_boundary_error;
  json out{
      {"schema", 1},
      {"problem", ctx.problem_name},
      {"hidden", report.hidden_count},
      {"M", ctx.boundary_count},
      {"K", ctx.interior_count},
      {"lambda", ctx.lambda},
      {"config",
       {{"eta", ctx.config.eta},
        {"box", {ctx.config.box_lo, ctx.config.box_hi}},
        {"iters_penalty", ctx.config.max_iters_penalty},
        {"iters_synergy", ctx.config.max_iters_synergy},
        {"grad_tol", ctx.config.grad_tol},
        {"seed", ctx.config.seed}}},
      {"phases", {{"penalty", std::move(penalty)}, {"synergy", phase_to_json(report.synergy)}}},
      {"interior_mse", report.synergy.final_error / static_cast<double>(ctx.interior_count)},
      {"boundary_max_abs_error", ctx.boundary_max_abs_error},
      {"notes", ctx.notes},
      {"wall_seconds", report.wall_seconds},
  };
  if (accuracy) {
    out["accuracy"] = {{"points", accuracy->points.size()},
                       {"max", accuracy->max},
                       {"mean", accuracy->mean},
                       {"rms", accuracy->rms}};
  }
  return out;
}

void write_accuracy_csv(std::ostream& out, const AccuracyReport& acc) {
  out << header(acc.points.dim()) << "psi_m,psi_a,abs_err\n";
  for (std::size_t i = 0; i < acc.points.size(); ++i) {
    write_point(out, acc.points[i]);
    out << format_double(acc.psi_m[i]) << ',' << format_double(acc.psi_a[i]) << ','
        << format_double(acc.abs_err[i]) << '\n';
  }
}

void write_values_csv(std::ostream& out, const PointCloud& points, const std::vector<double>& values) {
  out << header(points.dim()) << "psi_m\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    write_point(out, points[i]);
    out << format_double(values[i]) << '\n';
  }
}

}  // namespace collonet
