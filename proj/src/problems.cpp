#include "collonet/problems.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace collonet {

namespace {

constexpr double pi = std::numbers::pi;

// Ψ_a = e^{-x}(x + y³),  ∇²Ψ_a = e^{-x}(x - 2 + y³ + 6y)
double solution_2d(std::span<const double> p) { return std::exp(-p[0]) * (p[0] + p[1] * p[1] * p[1]); }
double source_2d(std::span<const double> p) {
  const double y = p[1];
  return std::exp(-p[0]) * (p[0] - 2.0 + y * y * y + 6.0 * y);
}

// Ψ_a = e^x y² + (z² - 2) sin y,  ∇²Ψ_a = e^x (y² + 2) + (4 - z²) sin y
double solution_3d(std::span<const double> p) {
  return std::exp(p[0]) * p[1] * p[1] + (p[2] * p[2] - 2.0) * std::sin(p[1]);
}
double source_3d(std::span<const double> p) {
  return std::exp(p[0]) * (p[1] * p[1] + 2.0) + (4.0 - p[2] * p[2]) * std::sin(p[1]);
}

const char* kSourceCorrection =
    "source is the exact Laplacian e^x (y^2 + 2) + (4 - z^2) sin y of the solution "
    "e^x y^2 + (z^2 - 2) sin y (the shorter form e^x y^2 + z^2 sin y does not satisfy the PDE)";

std::vector<double> values_at(const PointCloud& pts, const ScalarField& f) {
  std::vector<double> out;
  out.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out.push_back(f(pts[i]));
  return out;
}

BoundarySet boundary_from(PointCloud pts, const ScalarField& solution) {
  auto values = values_at(pts, solution);
  return BoundarySet::with_selected_lambda(std::move(pts), std::move(values));
}

template <typename Map>
PointCloud mapped(const PointCloud& params, std::size_t out_dim, Map&& map) {
  PointCloud out(out_dim, params.tag());
  for (std::size_t i = 0; i < params.size(); ++i) out.push_back(map(params[i]));
  return out;
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

BenchmarkCase make_p1() {
  const std::array<AxisBounds, 2> unit{AxisBounds{0, 1}, AxisBounds{0, 1}};
  ProblemSpec spec(2, Operator::laplacian, source_2d, boundary_from(rectangle_boundary(10, 10), solution_2d),
                   interior_grid_rectangle(10, unit), ScalarField(solution_2d));
  return {"p1",
          "unit square, Poisson with e^{-x}(x-2+y^3+6y)",
          std::move(spec),
          solution_2d,
          20,
          36,
          81,
          {"(x, y) in [0,1]x[0,1]", {0, 1}, {0, 1}, [](double x, double y) { return std::vector{x, y}; }},
          [](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            const double x = u(rng);
            return std::vector{x, u(rng)};
          },
          {}};
}

BenchmarkCase make_p2() {
  const std::array<AxisBounds, 2> polar{AxisBounds{0, 1}, AxisBounds{0, pi / 2}};
  auto interior = mapped(interior_grid_rectangle(10, polar), 2, [](std::span<const double> q) {
    return polar_to_cartesian(q[0], q[1]);
  });
  ProblemSpec spec(2, Operator::laplacian, source_2d,
                   boundary_from(quarter_disk_boundary(10, 20), solution_2d), std::move(interior),
                   ScalarField(solution_2d));
  return {"p2",
          "quarter of the unit disk, same PDE as p1",
          std::move(spec),
          solution_2d,
          20,
          37,
          81,
          {"(r, phi) in [0,1]x[0,pi/2]", {0, 1}, {0, pi / 2},
           [](double r, double phi) { return to_vec(polar_to_cartesian(r, phi)); }},
          [](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> r(0.0, 1.0), phi(0.0, pi / 2);
            const double rr = r(rng);
            return to_vec(polar_to_cartesian(rr, phi(rng)));
          },
          {"boundary: radial edges with 10 points each, arc with 20 points, origin merged"}};
}

BenchmarkCase make_p3() {
  PointCloud interior(2, PointTag::interior);
  for (int j = 1; j <= 9; ++j) {
    for (int k = 0; k < 17; ++k) interior.push_back(polar_to_cartesian(j / 10.0, 2.0 * pi * k / 17));
  }
  ProblemSpec spec(2, Operator::laplacian, source_2d,
                   boundary_from(circle_boundary(20, 1.0), solution_2d), std::move(interior),
                   ScalarField(solution_2d));
  return {"p3",
          "unit disk, same PDE as p1",
          std::move(spec),
          solution_2d,
          20,
          20,
          153,
          {"(r, phi) in [0,1]x[0,2pi]", {0, 1}, {0, 2 * pi},
           [](double r, double phi) { return to_vec(polar_to_cartesian(r, phi)); }},
          [](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> r(0.0, 1.0), phi(0.0, 2 * pi);
            const double rr = r(rng);
            return to_vec(polar_to_cartesian(rr, phi(rng)));
          },
          {"interior: 9 radii r=j/10 times 17 angles 2*pi*k/17"}};
}

BenchmarkCase make_p4() {
  const std::array<AxisBounds, 3> unit{AxisBounds{0, 1}, AxisBounds{0, 1}, AxisBounds{0, 1}};
  ProblemSpec spec(3, Operator::laplacian, source_3d, boundary_from(box_boundary_3d(7), solution_3d),
                   interior_grid_rectangle(10, unit), ScalarField(solution_3d));
  return {"p4",
          "unit cube, Poisson with the 3-D manufactured solution",
          std::move(spec),
          solution_3d,
          40,
          218,
          729,
          {"slice x=0.5, (y, z) in [0,1]x[0,1]", {0, 1}, {0, 1},
           [](double y, double z) { return std::vector{0.5, y, z}; }},
          [](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            const double x = u(rng);
            const double y = u(rng);
            return std::vector{x, y, u(rng)};
          },
          {kSourceCorrection, "boundary: 7x7 lattice on each cube face, shared edges merged"}};
}

BenchmarkCase make_p5() {
  const std::array<AxisBounds, 3> sector{AxisBounds{0.5, 1}, AxisBounds{0, pi / 2}, AxisBounds{0, pi / 2}};
  auto interior = mapped(interior_grid_rectangle(10, sector), 3, [](std::span<const double> s) {
    return spherical_to_cartesian(s[0], s[1], s[2]);
  });
  ProblemSpec spec(3, Operator::laplacian, source_3d,
                   boundary_from(spherical_sector_boundary(7), solution_3d), std::move(interior),
                   ScalarField(solution_3d));
  return {"p5",
          "spherical sector [0.5,1]x[0,pi/2]x[0,pi/2] in (r, phi, theta)",
          std::move(spec),
          solution_3d,
          40,
          176,
          729,
          {"slice r=0.75, (phi, theta) in [0,pi/2]x[0,pi/2]", {0, pi / 2}, {0, pi / 2},
           [](double phi, double theta) { return to_vec(spherical_to_cartesian(0.75, phi, theta)); }},
          [](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> r(0.5, 1.0), ang(0.0, pi / 2);
            const double rr = r(rng);
            const double phi = ang(rng);
            return to_vec(spherical_to_cartesian(rr, phi, ang(rng)));
          },
          {kSourceCorrection,
           "boundary: 7x7 lattice on each (r, phi, theta) face; the theta=0 face collapses onto the z axis"}};
}

}  // namespace

std::vector<BenchmarkCase> catalog() {
  std::vector<BenchmarkCase> out;
  out.push_back(make_p1());
  out.push_back(make_p2());
  out.push_back(make_p3());
  out.push_back(make_p4());
  out.push_back(make_p5());
  return out;
}

BenchmarkCase find_case(const std::string& id) {
  if (id == "p1") return make_p1();
  if (id == "p2") return make_p2();
  if (id == "p3") return make_p3();
  if (id == "p4") return make_p4();
  if (id == "p5") return make_p5();
  throw std::invalid_argument("unknown built-in problem '" + id + "' (expected p1..p5)");
}

BenchmarkCase with_source(const BenchmarkCase& base, ScalarField source) {
  const auto& old = base.problem;
  ProblemSpec spec(old.dimension(), old.op(), std::move(source), old.boundary(),
                   old.interior().points(), old.analytic_solution());
  return {base.id,           base.title, std::move(spec), base.solution, base.hidden_count,
          base.expected_boundary_count, base.expected_interior_count, base.grid,
          base.sample_interior, base.notes};
}

double verify_manufactured(const BenchmarkCase& c, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  constexpr double h = 1e-3;
  const auto& f = c.problem.source();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto x = c.sample_interior(rng);
    const double center = c.solution(x);
    double lap = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      auto at = [&](double offset) {
        auto y = x;
        y[j] += offset;
        return c.solution(y);
      };
      lap += (-at(2 * h) + 16 * at(h) - 30 * center + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
    }
    worst = std::max(worst, std::abs(lap - f(x)));
  }
  return worst;
}

PointCloud evaluation_grid(const BenchmarkCase& c, int resolution) {
  if (resolution < 2) throw std::invalid_argument("evaluation grid needs resolution >= 2");
  PointCloud out(c.problem.dimension());
  for (int i = 0; i < resolution; ++i) {
    const double a = c.grid.first.lo + (c.grid.first.hi - c.grid.first.lo) * i / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      const double b = c.grid.second.lo + (c.grid.second.hi - c.grid.second.lo) * j / (resolution - 1);
      out.push_back(c.grid.to_cartesian(a, b));
    }
  }
  return out;
}

AccuracyReport accuracy_report(const TrialSolution& sol, const ScalarField& exact,
                               const PointCloud& grid) {
  if (grid.dim() != sol.params().input_dim()) {
    throw std::invalid_argument("evaluation grid is " + std::to_string(grid.dim()) +
                                "-D but the solution is " +
                                std::to_string(sol.params().input_dim()) + "-D");
  }
  AccuracyReport r{grid, {}, {}, {}, 0.0, 0.0, 0.0};
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = trial_eval(sol, grid[i]);
    const double a = exact(grid[i]);
    const double e = std::abs(m - a);
    r.psi_m.push_back(m);
    r.psi_a.push_back(a);
    r.abs_err.push_back(e);
    r.max = std::max(r.max, e);
    sum += e;
    sum2 += e * e;
  }
  if (!grid.empty()) {
    r.mean = sum / static_cast<double>(grid.size());
    r.rms = std::sqrt(sum2 / static_cast<double>(grid.size()));
  }
  return r;
}

}  // namespace collonet
