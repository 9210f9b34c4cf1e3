#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "collonet/optim.hpp"

namespace collonet::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kNumericalError = 2 };

struct RunConfig {
  std::string problem;  // p1..p5 or a path to a problem file
  std::optional<std::size_t> hidden_count;
  TrainConfig train;
  std::filesystem::path out_dir = ".";
  int grid_resolution = 50;
};

struct EvalConfig {
  std::filesystem::path solution;
  std::filesystem::path points;
  std::optional<std::filesystem::path> out;  // stdout when unset
};

struct CheckConfig {
  std::string problem;
};

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalConfig& config, std::ostream& out, std::ostream& err);
int cmd_check(const CheckConfig& config, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches to a command.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace collonet::cli
