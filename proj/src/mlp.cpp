#include "collonet/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace collonet {

namespace {

struct SigmoidDerivs {
  double s0, s1, s2, s3;
};

SigmoidDerivs sigmoid_all(double z) {
  double s;
  if (z < -500.0) {
    const double e = std::exp(z);
    s = e / (1.0 + e);
  } else {
    s = 1.0 / (1.0 + std::exp(-z));
  }
  const double s1 = s * (1.0 - s);
  const double s2 = s1 * (1.0 - 2.0 * s);
  const double s3 = s2 * (1.0 - 2.0 * s) - 2.0 * s1 * s1;
  return {s, s1, s2, s3};
}

void check_dim(const MlpParams& params, std::span<const double> x) {
  if (x.size() != params.input_dim()) {
    throw std::invalid_argument("input has dimension " + std::to_string(x.size()) +
                                ", network expects " +
                                std::to_string(params.input_dim()));
  }
}

double activation(const MlpParams& params, std::size_t i, std::span<const double> x) {
  double z = params.biases()[i];
  for (std::size_t j = 0; j < x.size(); ++j) z += params.w(i, j) * x[j];
  return z;
}

double row_norm2(const MlpParams& params, std::size_t i) {
  double acc = 0.0;
  for (std::size_t j = 0; j < params.input_dim(); ++j) acc += params.w(i, j) * params.w(i, j);
  return acc;
}

void require_finite(const std::vector<double>& xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " contains a non-finite entry");
  }
}

}  // namespace

double sigmoid_k(double z, int k) {
  if (k < 0 || k > 3) throw std::invalid_argument("sigmoid derivative order must be in 0..3");
  const auto d = sigmoid_all(z);
  switch (k) {
    case 0: return d.s0;
    case 1: return d.s1;
    case 2: return d.s2;
    default: return d.s3;
  }
}

MlpParams::MlpParams(std::size_t hidden_count, std::size_t input_dim)
    : MlpParams(hidden_count, input_dim, std::vector<double>(hidden_count, 0.0),
                std::vector<double>(hidden_count * input_dim, 0.0),
                std::vector<double>(hidden_count, 0.0)) {}

MlpParams::MlpParams(std::size_t hidden_count, std::size_t input_dim,
                     std::vector<double> output_weights, std::vector<double> input_weights,
                     std::vector<double> biases)
    : hidden_(hidden_count), dim_(input_dim), v_(std::move(output_weights)),
      w_(std::move(input_weights)), u_(std::move(biases)) {
  if (hidden_ == 0 || dim_ == 0) throw std::invalid_argument("MLP needs H >= 1 and n >= 1");
  if (v_.size() != hidden_ || u_.size() != hidden_ || w_.size() != hidden_ * dim_) {
    throw std::invalid_argument("MLP weight shapes do not match H and n");
  }
  require_finite(v_, "output weights");
  require_finite(w_, "input weights");
  require_finite(u_, "biases");
}

MlpParams MlpParams::random(std::size_t hidden_count, std::size_t input_dim,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(hidden_count), w(hidden_count * input_dim), u(hidden_count);
  for (auto& x : v) x = dist(rng);
  for (auto& x : w) x = dist(rng);
  for (auto& x : u) x = dist(rng);
  return {hidden_count, input_dim, std::move(v), std::move(w), std::move(u)};
}

MlpParams MlpParams::from_flat(std::size_t hidden_count, std::size_t input_dim,
                               const Eigen::VectorXd& p) {
  const std::size_t expected = hidden_count * (input_dim + 2);
  if (static_cast<std::size_t>(p.size()) != expected) {
    throw std::invalid_argument("flat parameter vector has length " + std::to_string(p.size()) +
                                ", expected " + std::to_string(expected));
  }
  const double* data = p.data();
  std::vector<double> v(data, data + hidden_count);
  std::vector<double> w(data + hidden_count, data + hidden_count * (1 + input_dim));
  std::vector<double> u(data + hidden_count * (1 + input_dim), data + expected);
  return {hidden_count, input_dim, std::move(v), std::move(w), std::move(u)};
}

Eigen::VectorXd MlpParams::flatten() const {
  Eigen::VectorXd p(static_cast<Eigen::Index>(param_count()));
  std::size_t k = 0;
  for (double x : v_) p[k++] = x;
  for (double x : w_) p[k++] = x;
  for (double x : u_) p[k++] = x;
  return p;
}

double mlp_eval(const MlpParams& params, std::span<const double> x) {
  check_dim(params, x);
  double out = 0.0;
  for (std::size_t i = 0; i < params.hidden_count(); ++i) {
    out += params.output_weights()[i] * sigmoid_all(activation(params, i, x)).s0;
  }
  return out;
}

double mlp_pure_derivative(const MlpParams& params, std::span<const double> x,
                           std::size_t axis, int order) {
  check_dim(params, x);
  if (axis >= params.input_dim()) throw std::invalid_argument("derivative axis out of range");
  if (order != 1 && order != 2) throw std::invalid_argument("input derivative order must be 1 or 2");
  double out = 0.0;
  for (std::size_t i = 0; i < params.hidden_count(); ++i) {
    const auto d = sigmoid_all(activation(params, i, x));
    const double wij = params.w(i, axis);
    out += order == 1 ? params.output_weights()[i] * wij * d.s1
                      : params.output_weights()[i] * wij * wij * d.s2;
  }
  return out;
}

double mlp_laplacian(const MlpParams& params, std::span<const double> x) {
  check_dim(params, x);
  double out = 0.0;
  for (std::size_t j = 0; j < params.input_dim(); ++j) {
    out += mlp_pure_derivative(params, x, j, 2);
  }
  return out;
}

double mlp_eval_with_gradient(const MlpParams& params, std::span<const double> x,
                              std::span<double> grad) {
  check_dim(params, x);
  if (grad.size() != params.param_count()) throw std::invalid_argument("gradient buffer has wrong length");
  const std::size_t n = params.input_dim();
  double out = 0.0;
  for (std::size_t i = 0; i < params.hidden_count(); ++i) {
    const auto d = sigmoid_all(activation(params, i, x));
    const double vi = params.output_weights()[i];
    out += vi * d.s0;
    grad[params.v_index(i)] = d.s0;
    for (std::size_t j = 0; j < n; ++j) grad[params.w_index(i, j)] = vi * d.s1 * x[j];
    grad[params.u_index(i)] = vi * d.s1;
  }
  return out;
}

double mlp_laplacian_with_gradient(const MlpParams& params, std::span<const double> x,
                                   std::span<double> grad) {
  check_dim(params, x);
  if (grad.size() != params.param_count()) throw std::invalid_argument("gradient buffer has wrong length");
  const std::size_t n = params.input_dim();
  double out = 0.0;
  for (std::size_t i = 0; i < params.hidden_count(); ++i) {
    const auto d = sigmoid_all(activation(params, i, x));
    const double vi = params.output_weights()[i];
    const double wn2 = row_norm2(params, i);
    out += vi * wn2 * d.s2;
    grad[params.v_index(i)] = wn2 * d.s2;
    for (std::size_t j = 0; j < n; ++j) {
      grad[params.w_index(i, j)] = vi * (2.0 * params.w(i, j) * d.s2 + wn2 * d.s3 * x[j]);
    }
    grad[params.u_index(i)] = vi * wn2 * d.s3;
  }
  return out;
}

Eigen::VectorXd mlp_param_gradient(const MlpParams& params, std::span<const double> x) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(params.param_count()));
  mlp_eval_with_gradient(params, x, {g.data(), params.param_count()});
  return g;
}

Eigen::VectorXd mlp_laplacian_param_gradient(const MlpParams& params,
                                             std::span<const double> x) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(params.param_count()));
  mlp_laplacian_with_gradient(params, x, {g.data(), params.param_count()});
  return g;
}

}  // namespace collonet
