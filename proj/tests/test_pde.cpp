#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "collonet/pde.hpp"
#include "collonet/problems.hpp"
#include "fd_oracle.hpp"

using namespace collonet;
using collonet::testing::rel_close;

namespace {

double source_fn(std::span<const double> x) { return std::sin(x[0]) + x[1] * x[1]; }
double boundary_fn(std::span<const double> x) { return x[0] - 0.5 * x[1]; }

// Hexagon boundary (M = 6) and a 3×3 interior lattice.
ProblemSpec mini_problem(std::vector<std::size_t> order = {0, 1, 2, 3, 4, 5}) {
  PointCloud hex(2);
  for (std::size_t i : order) {
    const double phi = std::numbers::pi / 3.0 * static_cast<double>(i);
    hex.push_back({std::cos(phi), std::sin(phi)});
  }
  std::vector<double> values;
  for (std::size_t i = 0; i < hex.size(); ++i) values.push_back(boundary_fn(hex[i]));
  PointCloud interior(2);
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) interior.push_back({0.4 * i, 0.4 * j});
  }
  return {2, Operator::laplacian, source_fn, BoundarySet::with_selected_lambda(hex, values), interior};
}

MlpParams random_params(std::mt19937_64& rng, std::size_t h, std::size_t n) {
  return MlpParams::from_flat(
      h, n,
      Eigen::Map<const Eigen::VectorXd>(testing::uniform_vector(rng, h * (n + 2), -1.5, 1.5).data(),
                                        static_cast<Eigen::Index>(h * (n + 2))));
}

double total_synergy_oracle(const MlpParams& p, const ProblemSpec& problem) {
  // Independent path: q from the general solve, ∇²Ψ by summing the pieces.
  const auto sol = refresh_coefficients(TrialSolution(p, problem.boundary()));
  double total = 0.0;
  const auto& pts = problem.interior().points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double q_part = rbf_laplacian({sol.coefficients().data(), problem.boundary().size()},
                                        problem.boundary(), pts[i]);
    const double r = mlp_laplacian(p, pts[i]) + q_part - source_fn(pts[i]);
    total += r * r;
  }
  return total;
}

}  // namespace

TEST_CASE("trial evaluation") {
  const auto problem = mini_problem();
  std::mt19937_64 rng(3);
  const auto p = random_params(rng, 3, 2);
  const std::vector<double> x{0.1, -0.2};

  const TrialSolution pen(p, problem.boundary());
  CHECK(pen.mode() == TrialMode::penalty);
  CHECK(trial_eval(pen, x) == mlp_eval(p, x));
  CHECK(trial_laplacian(pen, x) == mlp_laplacian(p, x));

  Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(6, -1.0, 1.0);
  const TrialSolution syn(p, problem.boundary(), q);
  CHECK(syn.mode() == TrialMode::synergy);
  const std::span<const double> qs(q.data(), 6);
  CHECK(std::abs(trial_eval(syn, x) - (mlp_eval(p, x) + rbf_eval(qs, problem.boundary(), x))) <= 1e-15);
  CHECK(std::abs(trial_laplacian(syn, x) - (mlp_laplacian(p, x) + rbf_laplacian(qs, problem.boundary(), x))) <=
        1e-12);
  CHECK_THROWS_AS(TrialSolution(p, problem.boundary(), Eigen::VectorXd::Zero(5)), std::invalid_argument);

  // Zero network and one center: Ψ = q exp(-λ|x - R|²).
  PointCloud one(2);
  one.push_back({0.0, 0.0});
  const BoundarySet b1(one, {2.0}, 3.0);
  const TrialSolution s1(MlpParams(2, 2), b1, Eigen::VectorXd::Constant(1, 2.0));
  CHECK(trial_eval(s1, std::vector<double>{0.5, 0.0}) == doctest::Approx(2.0 * std::exp(-0.75)).epsilon(1e-15));
}

TEST_CASE("refresh_coefficients") {
  const auto problem = mini_problem();
  const auto& b = problem.boundary();

  // A network that already matches b needs no correction.
  PointCloud flat(2);
  flat.push_back({0.0, 0.0});
  flat.push_back({1.0, 0.0});
  const BoundarySet matched(flat, {1.0, 1.0}, 1.0);
  const auto already = refresh_coefficients(TrialSolution(MlpParams(1, 2, {2.0}, {0.0, 0.0}, {0.0}), matched));
  CHECK(already.coefficients().cwiseAbs().maxCoeff() == 0.0);

  PointCloud one(2);
  one.push_back({0.2, 0.3});
  const BoundarySet b1(one, {1.5}, 4.0);
  const auto single = refresh_coefficients(TrialSolution(MlpParams(1, 2, {1.0}, {0.0, 0.0}, {0.0}), b1));
  CHECK(single.coefficients()[0] == 1.0);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto sol = refresh_coefficients(TrialSolution(random_params(rng, 4, 2), b));
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(std::abs(trial_eval(sol, b.points()[i]) - b.values()[i]) <= 1e-8);
    const auto again = refresh_coefficients(sol, factorize_boundary(b));
    CHECK((again.coefficients() - sol.coefficients()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("residual") {
  // Zero network, q = 0: the residual is -f.
  const auto problem = mini_problem();
  const TrialSolution zero(MlpParams(2, 2), problem.boundary());
  const std::vector<double> r{0.3, 0.1};
  CHECK(residual(zero, problem, r) == -source_fn(r));

  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto sol = refresh_coefficients(TrialSolution(random_params(rng, 3, 2), problem.boundary()));
    const auto x = testing::uniform_vector(rng, 2, -0.5, 0.5);
    const double stencil =
        testing::fd_laplacian([&](const std::vector<double>& y) { return trial_eval(sol, y); }, x, 1e-4);
    CHECK(rel_close(residual(sol, problem, x) + source_fn(x), stencil, 1e-4, 1e-2));
  }

  // p1's exact solution satisfies its PDE.
  const auto p1 = find_case("p1");
  const std::vector<double> y{0.4, 0.7};
  const double lap = testing::fd_laplacian(
      [&](const std::vector<double>& z) { return p1.solution(z); }, y, 1e-4);
  CHECK(std::abs(lap - p1.problem.source()(y)) <= 1e-6);
  CHECK(p1.problem.source()(y) == doctest::Approx(std::exp(-0.4) * (0.4 - 2.0 + 0.343 + 6 * 0.7)).epsilon(1e-12));
}

TEST_CASE("penalty error") {
  // Zero source, zero boundary values, zero network: E = 0 with zero gradient.
  PointCloud hex(2);
  for (int i = 0; i < 6; ++i) hex.push_back({std::cos(i * 1.0472), std::sin(i * 1.0472)});
  PointCloud interior(2);
  interior.push_back({0.0, 0.0});
  interior.push_back({0.2, 0.1});
  const ProblemSpec zero_problem(2, Operator::laplacian, [](std::span<const double>) { return 0.0; },
                                 BoundarySet::with_selected_lambda(hex, std::vector<double>(6, 0.0)), interior);
  const auto z = penalty_error(MlpParams(3, 2), zero_problem, 100.0);
  CHECK(z.value == 0.0);
  CHECK(z.gradient.cwiseAbs().maxCoeff() == 0.0);

  const auto problem = mini_problem();
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_params(rng, 3, 2);
    const auto e = penalty_error(p, problem, 100.0);
    const auto fd = testing::fd_gradient(
        [&](const Eigen::VectorXd& flat) { return penalty_error(MlpParams::from_flat(3, 2, flat), problem, 100.0).value; },
        p.flatten(), 1e-6);
    CHECK(rel_close(e.gradient, fd, 1e-4));

    // Linear in η, split into its two sums.
    const auto terms = penalty_error_terms(p, problem, 1.0);
    const auto terms2 = penalty_error_terms(p, problem, 2.5);
    CHECK(terms2.interior == terms.interior);
    CHECK(terms2.boundary == terms.boundary);
    CHECK(terms2.value == doctest::Approx(terms.interior + 2.5 * terms.boundary).epsilon(1e-14));
    CHECK((terms2.gradient - terms.gradient).norm() ==
          doctest::Approx((penalty_error_terms(p, problem, 4.0).gradient - terms2.gradient).norm()));
    double boundary_sum = 0.0;
    for (std::size_t i = 0; i < problem.boundary().size(); ++i) {
      const double d = mlp_eval(p, problem.boundary().points()[i]) - problem.boundary().values()[i];
      boundary_sum += d * d;
    }
    CHECK(terms.boundary == doctest::Approx(boundary_sum).epsilon(1e-13));
  }
}

TEST_CASE("synergy error") {
  const auto problem = mini_problem();
  const SynergyObjective objective(problem);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_params(rng, 3, 2);
    const auto res = objective.evaluate(p);
    CHECK(rel_close(res.value, total_synergy_oracle(p, problem), 1e-10));

    // Sum of squared residuals of the refreshed trial solution.
    const TrialSolution sol(p, problem.boundary(), res.coefficients);
    double sq = 0.0;
    for (std::size_t i = 0; i < problem.interior().size(); ++i) {
      const double r = residual(sol, problem, problem.interior().points()[i]);
      sq += r * r;
    }
    CHECK(std::abs(sq - res.value) <= 1e-12 * std::max(1.0, sq));

    // Finite differences through the whole pipeline, including the q refresh.
    const auto fd = testing::fd_gradient(
        [&](const Eigen::VectorXd& flat) { return total_synergy_oracle(MlpParams::from_flat(3, 2, flat), problem); },
        p.flatten(), 1e-6);
    CHECK(rel_close(res.gradient, fd, 1e-3));

    const auto free_fn = synergy_error(p, problem);
    CHECK(free_fn.value == doctest::Approx(res.value).epsilon(1e-13));
  }

  // Reordering the boundary points does not change E.
  const auto shuffled = mini_problem({3, 0, 5, 1, 4, 2});
  const auto p = random_params(rng, 3, 2);
  CHECK(synergy_error(p, shuffled).value == doctest::Approx(synergy_error(p, problem).value).epsilon(1e-10));
}

TEST_CASE("synergy error vanishes at an exact solution") {
  // f ≡ 0 and b from a network: that network is an exact global minimizer.
  std::mt19937_64 rng(17);
  const auto target = random_params(rng, 2, 2);
  PointCloud hex(2);
  for (int i = 0; i < 6; ++i) hex.push_back({std::cos(i * 1.0472), std::sin(i * 1.0472)});
  std::vector<double> values;
  for (std::size_t i = 0; i < 6; ++i) values.push_back(mlp_eval(target, hex[i]));
  PointCloud interior(2);
  interior.push_back({0.1, 0.2});
  interior.push_back({-0.3, 0.0});
  const auto source = [target](std::span<const double> x) { return mlp_laplacian(target, x); };
  const ProblemSpec problem(2, Operator::laplacian, source, BoundarySet::with_selected_lambda(hex, values),
                            interior);
  const auto e = synergy_error(target, problem);
  CHECK(e.value <= 1e-24);
  CHECK(e.gradient.cwiseAbs().maxCoeff() <= 1e-10);
  const auto pen = penalty_error(target, problem, 100.0);
  CHECK(pen.value <= 1e-24);
  CHECK(pen.gradient.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("synergy trial solutions meet the boundary values on every benchmark") {
  std::mt19937_64 rng(19);
  for (const auto& c : catalog()) {
    const auto p = MlpParams::random(c.hidden_count, c.problem.dimension(), rng());
    const auto sol = refresh_coefficients(TrialSolution(p, c.problem.boundary()));
    double worst = 0.0;
    for (std::size_t i = 0; i < c.problem.boundary().size(); ++i) {
      worst = std::max(worst,
                       std::abs(trial_eval(sol, c.problem.boundary().points()[i]) - c.problem.boundary().values()[i]));
    }
    INFO(c.id);
    CHECK(worst <= 1e-8);
  }
}
