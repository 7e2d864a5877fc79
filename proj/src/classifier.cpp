#include "screening/classifier.hpp"

#include <algorithm>

namespace screening {

void Hyperparams::validate() const {
  if (hidden_width < 1) throw InvalidArgument("hidden_width", "must be at least 1");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning_rate", "must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw InvalidArgument("momentum", "must lie in [0, 1)");
  if (epochs < 0) throw InvalidArgument("epochs", "must be non-negative");
  if (!(l2 >= 0.0)) throw InvalidArgument("l2", "must be non-negative");
}

ClassifierModel train_classifier(const Eigen::Ref<const Eigen::MatrixXd>& features,
                                 std::span<const Label> labels, const Hyperparams& hyperparams,
                                 std::uint64_t seed) {
  hyperparams.validate();
  if (features.rows() == 0) throw DegenerateTraining("training set is empty");
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw InvalidArgument("labels", "count does not match feature rows");
  }
  const auto positives = std::count(labels.begin(), labels.end(), Label::Deception);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(labels.size())) {
    throw DegenerateTraining("training set must contain both Deception and Truth segments");
  }

  using Net = Mlp<double>;
  auto engine = make_engine(seed, 0);
  ClassifierModel model;
  model.hyperparams = hyperparams;
  model.seed = seed;
  model.network = Net(static_cast<int>(features.cols()), hyperparams.hidden_width, engine);

  // Standardise with training statistics; constant columns keep unit scale.
  const Eigen::VectorXd mean = features.colwise().mean().transpose();
  Eigen::VectorXd scale =
      ((features.rowwise() - mean.transpose()).colwise().squaredNorm() / static_cast<double>(features.rows()))
          .cwiseSqrt()
          .transpose();
  for (auto& s : scale) {
    if (!(s > 1e-12)) s = 1.0;
  }
  model.network.set_standardisation(mean, scale);
  const Eigen::MatrixXd z = model.network.standardise(features);

  Eigen::VectorXd targets(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    targets[static_cast<Eigen::Index>(i)] = labels[i] == Label::Deception ? 1.0 : 0.0;
  }

  const double lr = hyperparams.learning_rate;
  const double mu = hyperparams.momentum;
  Net::Gradient grad;
  Net::Gradient velocity;
  velocity.hidden_weights = Eigen::MatrixXd::Zero(hyperparams.hidden_width, features.cols());
  velocity.hidden_bias = Eigen::VectorXd::Zero(hyperparams.hidden_width);
  velocity.output_weights = Eigen::VectorXd::Zero(hyperparams.hidden_width);
  velocity.output_bias = 0.0;

  model.initial_loss = model.network.loss(z, targets, hyperparams.l2);
  for (int epoch = 0; epoch < hyperparams.epochs; ++epoch) {
    model.network.loss_and_gradient(z, targets, grad, hyperparams.l2);
    velocity.hidden_weights = mu * velocity.hidden_weights - lr * grad.hidden_weights;
    velocity.hidden_bias = mu * velocity.hidden_bias - lr * grad.hidden_bias;
    velocity.output_weights = mu * velocity.output_weights - lr * grad.output_weights;
    velocity.output_bias = mu * velocity.output_bias - lr * grad.output_bias;
    model.network.apply(velocity);
  }
  model.final_loss = model.network.loss(z, targets, hyperparams.l2);
  return model;
}

}  // namespace screening
