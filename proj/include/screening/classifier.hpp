#pragma once

// Single-hidden-layer perceptron scoring a segment's probability of deception.
//
// Inputs are standardised with statistics of the training set, passed through
// one layer of sigmoid units and a sigmoid output unit. Training minimises the
// mean binary cross-entropy (plus an optional L2 penalty on the weights) by
// full-batch gradient descent with heavy-ball momentum.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "screening/dataset.hpp"
#include "screening/errors.hpp"
#include "screening/rng.hpp"

namespace screening {

struct Hyperparams {
  int hidden_width = 16;
  double learning_rate = 0.5;
  double momentum = 0.9;
  int epochs = 300;
  double l2 = 0.0;
  std::uint64_t seed = 7;

  void validate() const;
};

namespace detail {

template <typename Scalar>
Scalar softplus(Scalar z) {
  using std::exp;
  using std::log1p;
  return (z > Scalar(0) ? z : Scalar(0)) + log1p(exp(-(z > Scalar(0) ? z : -z)));
}

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  using std::exp;
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-z));
  const Scalar e = exp(z);
  return e / (Scalar(1) + e);
}

}  // namespace detail

template <typename Scalar>
class Mlp {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  struct Gradient {
    Matrix hidden_weights;
    Vector hidden_bias;
    Vector output_weights;
    Scalar output_bias = Scalar(0);
  };

  Mlp() = default;

  /// Glorot-uniform weights and zero biases, drawn from `engine`.
  Mlp(int inputs, int hidden, Engine& engine)
      : hidden_weights_(hidden, inputs),
        hidden_bias_(Vector::Zero(hidden)),
        output_weights_(hidden),
        input_mean_(Vector::Zero(inputs)),
        input_scale_(Vector::Ones(inputs)) {
    std::uniform_real_distribution<double> hidden_init(-1.0, 1.0);
    const double hidden_limit = std::sqrt(6.0 / (inputs + hidden));
    const double output_limit = std::sqrt(6.0 / (hidden + 1));
    for (Eigen::Index r = 0; r < hidden_weights_.rows(); ++r) {
      for (Eigen::Index c = 0; c < hidden_weights_.cols(); ++c) {
        hidden_weights_(r, c) = Scalar(hidden_limit * hidden_init(engine));
      }
    }
    for (auto& w : output_weights_) w = Scalar(output_limit * hidden_init(engine));
  }

  int inputs() const noexcept { return static_cast<int>(hidden_weights_.cols()); }
  int hidden() const noexcept { return static_cast<int>(hidden_weights_.rows()); }

  const Matrix& hidden_weights() const noexcept { return hidden_weights_; }
  const Vector& hidden_bias() const noexcept { return hidden_bias_; }
  const Vector& output_weights() const noexcept { return output_weights_; }
  Scalar output_bias() const noexcept { return output_bias_; }

  /// Sets the affine map applied to raw inputs: z = (x - mean) / scale.
  void set_standardisation(Vector mean, Vector scale) {
    input_mean_ = std::move(mean);
    input_scale_ = std::move(scale);
  }
  const Vector& input_mean() const noexcept { return input_mean_; }
  const Vector& input_scale() const noexcept { return input_scale_; }

  template <typename Derived>
  Matrix standardise(const Eigen::MatrixBase<Derived>& raw) const {
    return (raw.rowwise() - input_mean_.transpose()).array().rowwise() /
           input_scale_.transpose().array();
  }

  /// Output logits for already-standardised rows.
  template <typename Derived>
  Vector logits_standardised(const Eigen::MatrixBase<Derived>& z) const {
    const Matrix activation = hidden_activation(z);
    return (activation * output_weights_).array() + output_bias_;
  }

  /// d_n in [0, 1] for each raw input row.
  template <typename Derived>
  Vector predict(const Eigen::MatrixBase<Derived>& raw) const {
    return logits_standardised(standardise(raw)).unaryExpr([](Scalar v) { return detail::sigmoid(v); });
  }

  /// Mean cross-entropy of standardised rows `z` against 0/1 targets, plus
  /// 0.5 * l2 * squared weight norm.
  template <typename Derived>
  Scalar loss(const Eigen::MatrixBase<Derived>& z, const Vector& targets, Scalar l2 = Scalar(0)) const {
    const Vector logits = logits_standardised(z);
    Scalar total(0);
    for (Eigen::Index i = 0; i < logits.size(); ++i) {
      total += detail::softplus(logits[i]) - targets[i] * logits[i];
    }
    return total / Scalar(logits.size()) + penalty(l2);
  }

  template <typename Derived>
  Scalar loss_and_gradient(const Eigen::MatrixBase<Derived>& z, const Vector& targets, Gradient& grad,
                           Scalar l2 = Scalar(0)) const {
    const Eigen::Index n = z.rows();
    const Matrix activation = hidden_activation(z);
    const Vector logits = (activation * output_weights_).array() + output_bias_;

    Scalar total(0);
    Vector delta(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      total += detail::softplus(logits[i]) - targets[i] * logits[i];
      delta[i] = (detail::sigmoid(logits[i]) - targets[i]) / Scalar(n);
    }

    grad.output_weights = activation.transpose() * delta + l2 * output_weights_;
    grad.output_bias = delta.sum();
    const Matrix hidden_delta =
        ((delta * output_weights_.transpose()).array() * activation.array() * (Scalar(1) - activation.array()))
            .matrix();
    grad.hidden_weights = hidden_delta.transpose() * z + l2 * hidden_weights_;
    grad.hidden_bias = hidden_delta.colwise().sum().transpose();
    return total / Scalar(n) + penalty(l2);
  }

  void apply(const Gradient& step) {
    hidden_weights_ += step.hidden_weights;
    hidden_bias_ += step.hidden_bias;
    output_weights_ += step.output_weights;
    output_bias_ += step.output_bias;
  }

  /// All trainable parameters in a fixed order: hidden weights (column-major),
  /// hidden biases, output weights, output bias.
  Vector parameters() const {
    Vector out(parameter_count());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < hidden_weights_.size(); ++i) out[k++] = hidden_weights_.data()[i];
    for (Eigen::Index i = 0; i < hidden_bias_.size(); ++i) out[k++] = hidden_bias_[i];
    for (Eigen::Index i = 0; i < output_weights_.size(); ++i) out[k++] = output_weights_[i];
    out[k] = output_bias_;
    return out;
  }

  void set_parameters(const Vector& flat) {
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < hidden_weights_.size(); ++i) hidden_weights_.data()[i] = flat[k++];
    for (Eigen::Index i = 0; i < hidden_bias_.size(); ++i) hidden_bias_[i] = flat[k++];
    for (Eigen::Index i = 0; i < output_weights_.size(); ++i) output_weights_[i] = flat[k++];
    output_bias_ = flat[k];
  }

  static Vector flatten(const Gradient& g) {
    Vector out(g.hidden_weights.size() + g.hidden_bias.size() + g.output_weights.size() + 1);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < g.hidden_weights.size(); ++i) out[k++] = g.hidden_weights.data()[i];
    for (Eigen::Index i = 0; i < g.hidden_bias.size(); ++i) out[k++] = g.hidden_bias[i];
    for (Eigen::Index i = 0; i < g.output_weights.size(); ++i) out[k++] = g.output_weights[i];
    out[k] = g.output_bias;
    return out;
  }

  Eigen::Index parameter_count() const noexcept {
    return hidden_weights_.size() + hidden_bias_.size() + output_weights_.size() + 1;
  }

 private:
  template <typename Derived>
  Matrix hidden_activation(const Eigen::MatrixBase<Derived>& z) const {
    Matrix pre = z * hidden_weights_.transpose();
    pre.rowwise() += hidden_bias_.transpose();
    return pre.unaryExpr([](Scalar v) { return detail::sigmoid(v); });
  }

  Scalar penalty(Scalar l2) const {
    if (l2 == Scalar(0)) return Scalar(0);
    return Scalar(0.5) * l2 * (hidden_weights_.squaredNorm() + output_weights_.squaredNorm());
  }

  Matrix hidden_weights_;
  Vector hidden_bias_;
  Vector output_weights_;
  Scalar output_bias_ = Scalar(0);
  Vector input_mean_;
  Vector input_scale_;
};

/// A trained scorer together with the settings that produced it.
struct ClassifierModel {
  Mlp<double> network;
  Hyperparams hyperparams;
  std::uint64_t seed = 0;
  double initial_loss = 0.0;
  double final_loss = 0.0;

  /// d_n for each row of raw features.
  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::MatrixXd>& features) const {
    return network.predict(features);
  }
};

/// Throws DegenerateTraining when either label is missing.
ClassifierModel train_classifier(const Eigen::Ref<const Eigen::MatrixXd>& features,
                                 std::span<const Label> labels, const Hyperparams& hyperparams,
                                 std::uint64_t seed);

}  // namespace screening
