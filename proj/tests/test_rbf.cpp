#include <cmath>
#include <random>

#include "doctest.h"

#include "collonet/error.hpp"
#include "collonet/mlp.hpp"
#include "collonet/rbf.hpp"
#include "fd_oracle.hpp"

using namespace collonet;
using collonet::testing::rel_close;

namespace {

BoundarySet random_boundary(std::mt19937_64& rng, std::size_t m, std::size_t dim) {
  PointCloud pts(dim);
  for (std::size_t i = 0; i < m; ++i) pts.push_back(testing::uniform_vector(rng, dim, 0.0, 1.0));
  auto values = testing::uniform_vector(rng, m, -1.0, 1.0);
  return BoundarySet::with_selected_lambda(std::move(pts), std::move(values));
}

}  // namespace

TEST_CASE("boundary set invariants") {
  PointCloud pts(2);
  pts.push_back({0.0, 0.0});
  pts.push_back({1.0, 0.0});
  CHECK_THROWS_AS(BoundarySet(pts, {1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(BoundarySet(pts, {1.0, 2.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BoundarySet(pts, {1.0, 2.0}, INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(BoundarySet(PointCloud(2), {}, 1.0), std::invalid_argument);

  pts.push_back({0.0, 0.0});
  try {
    BoundarySet(pts, {1.0, 2.0, 3.0}, 1.0);
    FAIL("duplicate point accepted");
  } catch (const DegenerateGeometryError& e) {
    CHECK(e.first() == 0);
    CHECK(e.second() == 2);
  }
}

TEST_CASE("interpolation matrix") {
  PointCloud one(2);
  one.push_back({0.3, 0.4});
  const auto a1 = build_interpolation_matrix(BoundarySet(one, {0.0}, 5.0));
  CHECK(a1.rows() == 1);
  CHECK(a1(0, 0) == 1.0);

  const double a = 0.37;
  PointCloud two(2);
  two.push_back({0.0, 0.0});
  two.push_back({a, 0.0});
  const auto a2 = build_interpolation_matrix(BoundarySet(two, {0.0, 0.0}, 1.0 / (a * a)));
  CHECK(a2(0, 1) == doctest::Approx(0.36787944117144233).epsilon(1e-15));

  std::mt19937_64 rng(1);
  const auto b = random_boundary(rng, 30, 3);
  const auto m = build_interpolation_matrix(b);
  CHECK(m == m.transpose());
  CHECK(m.diagonal() == Eigen::VectorXd::Ones(30));
}

TEST_CASE("cholesky factorization") {
  const auto id = cholesky_factorize(Eigen::MatrixXd::Identity(4, 4));
  CHECK(id.lower() == Eigen::MatrixXd::Identity(4, 4));

  const double e = std::exp(-1.0);
  Eigen::Matrix2d a;
  a << 1.0, e, e, 1.0;
  const auto f = cholesky_factorize(a);
  CHECK(f.lower()(0, 0) == 1.0);
  CHECK(f.lower()(1, 0) == doctest::Approx(e).epsilon(1e-15));
  CHECK(f.lower()(1, 1) == doctest::Approx(std::sqrt(1.0 - e * e)).epsilon(1e-15));
  CHECK(f.lower()(0, 1) == 0.0);

  // 50 nearly coincident points with a tiny λ make A numerically rank one.
  PointCloud cluster(2);
  for (int i = 0; i < 50; ++i) cluster.push_back({1e-3 * i, 0.0});
  const BoundarySet degenerate(cluster, std::vector<double>(50, 0.0), 1e-6);
  CHECK_THROWS_AS(cholesky_factorize(build_interpolation_matrix(degenerate)), SingularMatrixError);
  try {
    (void)factorize_boundary(degenerate);
  } catch (const SingularMatrixError& err) {
    CHECK(err.pivot() >= 1);
    CHECK(err.pivot() < 50);
  }

  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto b = random_boundary(rng, 25, 2);
    const auto mat = build_interpolation_matrix(b);
    const auto fac = factorize_boundary(b);
    REQUIRE(fac.provenance().has_value());
    CHECK(fac.provenance()->lambda == b.lambda());
    CHECK(fac.lower().diagonal().minCoeff() > 0.0);
    const Eigen::MatrixXd llt = fac.lower() * fac.lower().transpose();
    CHECK((llt - mat).cwiseAbs().maxCoeff() <= 1e-10 * mat.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("coefficient solve") {
  PointCloud one(2);
  one.push_back({0.0, 0.0});
  const auto f1 = factorize_boundary(BoundarySet(one, {0.7}, 1.0));
  CHECK(solve_coefficients(f1, Eigen::VectorXd::Constant(1, 0.7))[0] == 0.7);

  std::mt19937_64 rng(4);
  const auto b = random_boundary(rng, 20, 2);
  const auto fac = factorize_boundary(b);
  CHECK(solve_coefficients(fac, Eigen::VectorXd::Zero(20)) == Eigen::VectorXd::Zero(20));
  const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(b.values().data(), 20);
  const auto q = solve_coefficients(fac, c);
  CHECK((build_interpolation_matrix(b) * q - c).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + c.cwiseAbs().maxCoeff()));
  CHECK_THROWS_AS(solve_coefficients(fac, Eigen::VectorXd::Zero(19)), std::invalid_argument);

  // Interpolation holds at the centers.
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(std::abs(rbf_eval({q.data(), 20}, b, b.points()[i]) - c[static_cast<Eigen::Index>(i)]) <= 1e-8);
  }
}

TEST_CASE("gaussian sum and its Laplacian") {
  std::mt19937_64 rng(6);
  const auto b = random_boundary(rng, 8, 2);
  const auto r3 = b.points()[3];
  const std::vector<double> zeros(8, 0.0);
  CHECK(rbf_eval(zeros, b, r3) == 0.0);
  CHECK(rbf_laplacian(zeros, b, r3) == 0.0);

  // Only the k-th coefficient is nonzero, so the center value is exactly 1 and the Laplacian -2nλ.
  std::vector<double> only(8, 0.0);
  only[5] = 1.0;
  CHECK(rbf_eval(only, b, b.points()[5]) == 1.0);
  CHECK(rbf_laplacian(only, b, b.points()[5]) == doctest::Approx(-4.0 * b.lambda()).epsilon(1e-15));

  CHECK_THROWS_AS(rbf_eval(zeros, b, std::vector<double>{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(rbf_eval(std::vector<double>(7, 0.0), b, r3), std::invalid_argument);

  for (int t = 0; t < 100; ++t) {
    const auto bt = random_boundary(rng, 6, 3);
    const auto q = testing::uniform_vector(rng, 6, -1, 1);
    const auto x = testing::uniform_vector(rng, 3, 0, 1);
    double oracle = 0.0;
    for (std::size_t l = 0; l < 6; ++l) {
      double d2 = 0.0;
      for (int j = 0; j < 3; ++j) d2 += (x[j] - bt.points()[l][j]) * (x[j] - bt.points()[l][j]);
      oracle += q[l] * std::exp(-bt.lambda() * d2);
    }
    CHECK(std::abs(rbf_eval(q, bt, x) - oracle) <= 1e-14);

    const double h = 1e-3 / std::sqrt(bt.lambda());
    const double stencil = testing::fd_laplacian([&](const std::vector<double>& y) { return rbf_eval(q, bt, y); }, x, h);
    CHECK(rel_close(rbf_laplacian(q, bt, x), stencil, 1e-4, 1e-3 * bt.lambda()));
  }
}

TEST_CASE("laplacian table reproduces rbf_laplacian") {
  std::mt19937_64 rng(8);
  const auto b = random_boundary(rng, 10, 2);
  PointCloud pts(2);
  for (int i = 0; i < 15; ++i) pts.push_back(testing::uniform_vector(rng, 2, 0, 1));
  const auto table = rbf_laplacian_matrix(b, pts);
  const auto q = testing::uniform_vector(rng, 10, -1, 1);
  const Eigen::VectorXd viaTable = table * Eigen::Map<const Eigen::VectorXd>(q.data(), 10);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(viaTable[static_cast<Eigen::Index>(i)] == doctest::Approx(rbf_laplacian(q, b, pts[i])).epsilon(1e-13));
  }
}

TEST_CASE("coefficient jacobian") {
  PointCloud one(2);
  one.push_back({0.0, 0.0});
  const auto f1 = factorize_boundary(BoundarySet(one, {0.0}, 1.0));
  Eigen::MatrixXd g(1, 3);
  g << 0.5, -2.0, 3.0;
  CHECK(coefficient_param_jacobian(f1, g) == -g);

  std::mt19937_64 rng(10);
  const auto b = random_boundary(rng, 12, 2);
  const auto fac = factorize_boundary(b);
  CHECK(coefficient_param_jacobian(fac, Eigen::MatrixXd::Zero(12, 5)) == Eigen::MatrixXd::Zero(12, 5));
  const Eigen::MatrixXd rhs = Eigen::MatrixXd::Random(12, 7);
  const auto jac = coefficient_param_jacobian(fac, rhs);
  CHECK((build_interpolation_matrix(b) * jac + rhs).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK_THROWS_AS(coefficient_param_jacobian(fac, Eigen::MatrixXd::Zero(11, 5)), std::invalid_argument);

  // q(p) = A⁻¹(b - N(R, p)): perturbing p moves q by (∂q/∂p)·δp.
  const auto params = MlpParams::random(4, 2, 3);
  auto q_of = [&](const Eigen::VectorXd& flat) {
    const auto p = MlpParams::from_flat(4, 2, flat);
    Eigen::VectorXd c(12);
    for (std::size_t i = 0; i < 12; ++i) c[static_cast<Eigen::Index>(i)] = b.values()[i] - mlp_eval(p, b.points()[i]);
    return solve_coefficients(fac, c);
  };
  Eigen::MatrixXd grads(12, static_cast<Eigen::Index>(params.param_count()));
  for (std::size_t i = 0; i < 12; ++i) grads.row(static_cast<Eigen::Index>(i)) = mlp_param_gradient(params, b.points()[i]);
  const auto dq = coefficient_param_jacobian(fac, grads);
  const Eigen::VectorXd p0 = params.flatten();
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd dir = Eigen::Map<const Eigen::VectorXd>(
        testing::uniform_vector(rng, static_cast<std::size_t>(p0.size()), -1, 1).data(), p0.size());
    dir *= 1e-6 / dir.norm();
    // Central difference removes the second-order term.
    const Eigen::VectorXd observed = (q_of(p0 + dir) - q_of(p0 - dir)) / 2.0;
    CHECK(rel_close(Eigen::VectorXd(dq * dir), observed, 1e-4));
  }
}
