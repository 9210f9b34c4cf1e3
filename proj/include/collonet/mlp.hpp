#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace collonet {

/// σ^(k)(z) for the logistic sigmoid σ(z) = 1/(1+e^{-z}), k in 0..3.
double sigmoid_k(double z, int k);

/// Weights of a one-hidden-layer sigmoidal perceptron with linear output:
///
///   N(x) = Σ_i v_i σ(Σ_j w_ij x_j + u_i)
///
/// The flattened parameter vector p is laid out as v (H), then w row-major
/// (H×n), then u (H). Every gradient in this library uses that order.
class MlpParams {
public:
  MlpParams(std::size_t hidden_count, std::size_t input_dim);
  MlpParams(std::size_t hidden_count, std::size_t input_dim,
            std::vector<double> output_weights, std::vector<double> input_weights,
            std::vector<double> biases);

  /// Uniform [-1, 1] initialization of every entry.
  static MlpParams random(std::size_t hidden_count, std::size_t input_dim,
                          std::uint64_t seed);
  static MlpParams from_flat(std::size_t hidden_count, std::size_t input_dim,
                             const Eigen::VectorXd& p);

  std::size_t hidden_count() const noexcept { return hidden_; }
  std::size_t input_dim() const noexcept { return dim_; }
  std::size_t param_count() const noexcept { return hidden_ * (dim_ + 2); }

  std::span<const double> output_weights() const noexcept { return v_; }
  std::span<const double> input_weights() const noexcept { return w_; }
  std::span<const double> biases() const noexcept { return u_; }
  double w(std::size_t i, std::size_t j) const noexcept { return w_[i * dim_ + j]; }

  Eigen::VectorXd flatten() const;

  // Offsets into the flat vector.
  std::size_t v_index(std::size_t i) const noexcept { return i; }
  std::size_t w_index(std::size_t i, std::size_t j) const noexcept {
    return hidden_ + i * dim_ + j;
  }
  std::size_t u_index(std::size_t i) const noexcept { return hidden_ * (1 + dim_) + i; }

private:
  std::size_t hidden_;
  std::size_t dim_;
  std::vector<double> v_;
  std::vector<double> w_;
  std::vector<double> u_;
};

double mlp_eval(const MlpParams& params, std::span<const double> x);

/// ∂^k N / ∂x_axis^k for k in {1, 2}.
double mlp_pure_derivative(const MlpParams& params, std::span<const double> x,
                           std::size_t axis, int order);

double mlp_laplacian(const MlpParams& params, std::span<const double> x);

/// ∂N/∂p in flat order.
Eigen::VectorXd mlp_param_gradient(const MlpParams& params, std::span<const double> x);

/// ∂(∇²N)/∂p in flat order.
Eigen::VectorXd mlp_laplacian_param_gradient(const MlpParams& params,
                                             std::span<const double> x);

// Fused kernels used by the error assembly. `grad` must have param_count()
// entries; it is overwritten. Return the value (N or ∇²N respectively).
double mlp_eval_with_gradient(const MlpParams& params, std::span<const double> x,
                              std::span<double> grad);
double mlp_laplacian_with_gradient(const MlpParams& params, std::span<const double> x,
                                   std::span<double> grad);

}  // namespace collonet
