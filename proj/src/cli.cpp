#include "collonet/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "collonet/error.hpp"
#include "collonet/format.hpp"
#include "collonet/io.hpp"
#include "collonet/problem_file.hpp"
#include "collonet/problems.hpp"

namespace collonet::cli {

namespace fs = std::filesystem;

namespace {

struct LoadedProblem {
  std::string name;
  ProblemSpec problem;
  std::optional<ScalarField> solution;
  std::size_t default_hidden;
  std::function<PointCloud(int)> evaluation_points;
  std::vector<std::string> notes;
};

bool is_builtin(const std::string& id) {
  return id == "p1" || id == "p2" || id == "p3" || id == "p4" || id == "p5";
}

LoadedProblem load_problem(const std::string& selector) {
  if (selector.empty()) throw ConfigError("no problem given (use --problem p1..p5 or a file path)");
  if (is_builtin(selector)) {
    auto c = find_case(selector);
    auto grid_case = std::make_shared<BenchmarkCase>(c);
    return {c.id, c.problem, c.solution, c.hidden_count,
            [grid_case](int res) { return evaluation_grid(*grid_case, res); }, c.notes};
  }
  auto pf = load_problem_file(selector);
  auto problem = pf.to_problem();
  std::optional<ScalarField> solution;
  if (pf.solution) solution = ScalarField(*pf.solution);
  const std::size_t hidden = pf.hidden_count.value_or(pf.dimension >= 3 ? 40 : 20);
  // Without a figure rectangle, accuracy is measured at the collocation and boundary points.
  PointCloud eval_points = pf.interior;
  for (std::size_t i = 0; i < pf.boundary.size(); ++i) eval_points.push_back(pf.boundary[i]);
  eval_points.set_tag(PointTag::unspecified);
  return {pf.name, std::move(problem), std::move(solution), hidden,
          [eval_points](int) { return eval_points; }, {}};
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

double boundary_max_error(const TrialSolution& sol) {
  const auto& b = sol.boundary();
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    worst = std::max(worst, std::abs(trial_eval(sol, b.points()[i]) - b.values()[i]));
  }
  return worst;
}

}  // namespace

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.train.validate();
    if (config.grid_resolution < 2) throw ConfigError("--grid-res must be at least 2");
    auto loaded = load_problem(config.problem);

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + config.out_dir.string() + "': " + ec.message());
    auto solution_out = open_output(config.out_dir / "solution.json");
    auto report_out = open_output(config.out_dir / "report.json");
    auto accuracy_out = open_output(config.out_dir / "accuracy.csv");

    const std::size_t hidden = config.hidden_count.value_or(loaded.default_hidden);
    auto result = two_phase_train(loaded.problem, hidden, config.train);
    const auto& sol = result.solution;

    const auto grid = loaded.evaluation_points(config.grid_resolution);
    std::optional<AccuracyReport> acc;
    if (loaded.solution) {
      acc = accuracy_report(sol, *loaded.solution, grid);
      write_accuracy_csv(accuracy_out, *acc);
    } else {
      std::vector<double> values;
      for (std::size_t i = 0; i < grid.size(); ++i) values.push_back(trial_eval(sol, grid[i]));
      write_values_csv(accuracy_out, grid, values);
    }

    const ReportContext ctx{loaded.name,
                            loaded.problem.boundary().size(),
                            loaded.problem.interior().size(),
                            loaded.problem.boundary().lambda(),
                            config.train,
                            loaded.notes,
                            boundary_max_error(sol)};
    solution_out << solution_to_json(sol, loaded.name).dump(2) << '\n';
    report_out << report_to_json(result.report, ctx, acc ? &*acc : nullptr).dump(2) << '\n';
    if (!solution_out || !report_out || !accuracy_out) throw ConfigError("failed writing output files");

    out << loaded.name << ": H=" << hidden << " M=" << ctx.boundary_count << " K=" << ctx.interior_count
        << " penalty " << result.report.penalty.final_error << " ("
        << to_string(result.report.penalty.reason) << ", " << result.report.penalty.iterations
        << " it) synergy " << result.report.synergy.final_error << " ("
        << to_string(result.report.synergy.reason) << ", " << result.report.synergy.iterations
        << " it) bc_err " << ctx.boundary_max_abs_error;
    if (acc) out << " max_err " << acc->max;
    out << '\n';
    return kSuccess;
  });
}

int cmd_eval(const EvalConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream sol_in(config.solution);
    if (!sol_in) throw ConfigError("cannot open solution file '" + config.solution.string() + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(sol_in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("solution file '" + config.solution.string() + "' is not valid JSON: " + e.what());
    }
    const auto sol = solution_from_json(j);

    std::ifstream pts_in(config.points);
    if (!pts_in) throw ConfigError("cannot open points file '" + config.points.string() + "'");
    std::stringstream buffer;
    buffer << pts_in.rdbuf();
    const std::string text = buffer.str();

    std::ofstream file_out;
    std::ostream* sink = &out;
    if (config.out) {
      file_out = open_output(*config.out);
      sink = &file_out;
    }
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return kSuccess;

    std::istringstream in(text);
    const auto points = PointCloud::read_csv(in);
    if (points.dim() != sol.params().input_dim()) {
      throw ConfigError("points are " + std::to_string(points.dim()) + "-D but the solution is " +
                        std::to_string(sol.params().input_dim()) + "-D");
    }
    std::vector<double> values;
    values.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) values.push_back(trial_eval(sol, points[i]));
    write_values_csv(*sink, points, values);
    return kSuccess;
  });
}

int cmd_check(const CheckConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto loaded = load_problem(config.problem);
    const auto& boundary = loaded.problem.boundary();
    out << "problem=" << loaded.name << '\n';
    out << "dimension=" << loaded.problem.dimension() << '\n';
    out << "M=" << boundary.size() << '\n';
    out << "K=" << loaded.problem.interior().size() << '\n';
    if (boundary.size() >= 2) {
      const auto pair = closest_pair(boundary.points());
      out << "a=" << format_double(pair.distance) << '\n';
    }
    out << "lambda=" << format_double(boundary.lambda()) << '\n';
    for (const auto& note : loaded.notes) out << "note: " << note << '\n';

    const Eigen::MatrixXd a = build_interpolation_matrix(boundary);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    out << "condition_estimate=" << (lo > 0.0 ? format_double(hi / lo) : std::string("inf")) << '\n';
    try {
      (void)cholesky_factorize(a);
      out << "cholesky=ok\n";
    } catch (const SingularMatrixError& e) {
      out << "cholesky=failed pivot=" << e.pivot() << '\n';
      err << "error: lambda=" << format_double(boundary.lambda())
          << " makes the interpolation matrix singular; increase lambda\n";
      return kNumericalError;
    }
    return kSuccess;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet PDE solver on point-cloud boundaries (MLP + Gaussian RBF trial solutions)"};
  app.require_subcommand(1);

  RunConfig solve;
  std::vector<double> box;
  auto* solve_cmd = app.add_subcommand("solve", "train a trial solution and write its artifacts");
  solve_cmd->add_option("--problem", solve.problem, "built-in id (p1..p5) or problem file")->required();
  solve_cmd->add_option("--hidden", solve.hidden_count, "hidden units (default 20 in 2-D, 40 in 3-D)");
  solve_cmd->add_option("--eta", solve.train.eta, "penalty factor")->capture_default_str();
  solve_cmd->add_option("--seed", solve.train.seed, "initialization seed")->capture_default_str();
  solve_cmd->add_option("--iters-penalty", solve.train.max_iters_penalty, "penalty-phase budget")
      ->capture_default_str();
  solve_cmd->add_option("--iters-synergy", solve.train.max_iters_synergy, "synergy-phase budget")
      ->capture_default_str();
  solve_cmd->add_option("--out", solve.out_dir, "output directory")->capture_default_str();
  solve_cmd->add_option("--grid-res", solve.grid_resolution, "evaluation grid points per axis")
      ->capture_default_str();
  solve_cmd->add_option("--box", box, "bound B for weights/biases (or LO HI)")->expected(1, 2);

  EvalConfig eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a saved solution at points from a CSV file");
  eval_cmd->add_option("--solution", eval.solution, "solution.json from solve")->required();
  eval_cmd->add_option("--points", eval.points, "point CSV")->required();
  eval_cmd->add_option("--out", eval.out, "output CSV (default stdout)");

  CheckConfig check;
  auto* check_cmd = app.add_subcommand("check", "validate a problem and report its geometry");
  check_cmd->add_option("--problem", check.problem, "built-in id (p1..p5) or problem file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  if (*solve_cmd) {
    if (box.size() == 1) {
      solve.train.box_lo = -box[0];
      solve.train.box_hi = box[0];
    } else if (box.size() == 2) {
      solve.train.box_lo = box[0];
      solve.train.box_hi = box[1];
    }
    return cmd_solve(solve, out, err);
  }
  if (*eval_cmd) return cmd_eval(eval, out, err);
  return cmd_check(check, out, err);
}

}  // namespace collonet::cli
