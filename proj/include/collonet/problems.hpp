#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "collonet/pde.hpp"

namespace collonet {

/// Draws one point from a domain, used for randomized consistency checks.
using DomainSampler = std::function<std::vector<double>(std::mt19937_64&)>;

/// Evaluation grid: a res×res lattice over a 2-D parameter rectangle mapped
/// into Cartesian space (possibly a slice of a 3-D domain).
struct GridDescription {
  std::string label;       // e.g. "(r, phi) in [0,1]x[0,pi/2]"
  AxisBounds first;
  AxisBounds second;
  std::function<std::vector<double>(double, double)> to_cartesian;
};

struct BenchmarkCase {
  std::string id;
  std::string title;
  ProblemSpec problem;
  ScalarField solution;
  std::size_t hidden_count;
  std::size_t expected_boundary_count;
  std::size_t expected_interior_count;
  GridDescription grid;
  DomainSampler sample_interior;
  std::vector<std::string> notes;
};

/// The five built-in benchmarks p1..p5, freshly constructed.
std::vector<BenchmarkCase> catalog();
BenchmarkCase find_case(const std::string& id);

/// Same case with its source replaced (collocation values recomputed).
BenchmarkCase with_source(const BenchmarkCase& base, ScalarField source);

/// Max over `samples` random interior points of |∇²Ψ_a - f|, with ∇²
/// from a fourth-order central difference.
double verify_manufactured(const BenchmarkCase& c, int samples = 200, std::uint64_t seed = 1);

PointCloud evaluation_grid(const BenchmarkCase& c, int resolution = 50);

struct AccuracyReport {
  PointCloud points;
  std::vector<double> psi_m;
  std::vector<double> psi_a;
  std::vector<double> abs_err;
  double max = 0.0;
  double mean = 0.0;
  double rms = 0.0;
};

AccuracyReport accuracy_report(const TrialSolution& sol, const ScalarField& exact,
                               const PointCloud& grid);
inline AccuracyReport accuracy_report(const TrialSolution& sol, const BenchmarkCase& c,
                                      const PointCloud& grid) {
  return accuracy_report(sol, c.solution, grid);
}

}  // namespace collonet
