#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "collonet/pde.hpp"

namespace collonet {

/// Malformed or unreadable configuration / problem / solution file.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One factor of a term: exp(s·x_j), sin(s·x_j) or cos(s·x_j) with s = ±1.
struct Factor {
  enum class Kind { exp, sin, cos };
  Kind kind;
  std::size_t axis;
  double sign = 1.0;
};

/// c · Π_j x_j^{a_j} · Π factors
struct Term {
  double coefficient = 1.0;
  std::vector<int> powers;
  std::vector<Factor> factors;
};

/// A sum of terms. This covers every source and solution of the built-in
/// benchmarks without a general expression parser.
class TermExpression {
public:
  TermExpression() = default;
  TermExpression(std::size_t dim, std::vector<Term> terms);

  static TermExpression from_json(const nlohmann::json& j, std::size_t dim);
  nlohmann::json to_json() const;

  double operator()(std::span<const double> x) const;
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

private:
  std::size_t dim_ = 0;
  std::vector<Term> terms_;
};

/// Problem described by a `"schema": 1` JSON file.
struct ProblemFile {
  std::string name;
  std::size_t dimension;
  TermExpression source;
  std::optional<TermExpression> solution;
  std::optional<std::size_t> hidden_count;
  PointCloud boundary;
  std::vector<double> boundary_values;
  PointCloud interior;
  std::optional<double> lambda;

  /// Builds the ProblemSpec; λ defaults to select_lambda(boundary).
  ProblemSpec to_problem() const;
};

/// Relative point-file paths resolve against the problem file's directory.
ProblemFile parse_problem_file(const nlohmann::json& j, const std::filesystem::path& base_dir,
                               const std::string& name = "user");
ProblemFile load_problem_file(const std::filesystem::path& path);

}  // namespace collonet
