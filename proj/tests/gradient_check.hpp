#pragma once

// Central finite differences of the training loss, evaluated in long double
// on a copy of the network so that round-off in the loss difference does not
// swamp small gradient components.

#include <algorithm>
#include <cmath>

#include "screening/classifier.hpp"

namespace gradcheck {

/// Worst per-parameter relative error |a - n| / max(|a|, |n|, 1e-8) between
/// the double-precision analytic gradient and the central difference.
inline double worst_relative_error(const screening::Mlp<double>& net, const Eigen::MatrixXd& z,
                                   const Eigen::VectorXd& targets, double l2, double h = 1e-5) {
  using Wide = screening::Mlp<long double>;
  screening::Mlp<double>::Gradient g;
  net.loss_and_gradient(z, targets, g, l2);
  const Eigen::VectorXd analytic = screening::Mlp<double>::flatten(g);

  screening::Engine unused(0);
  Wide wide(net.inputs(), net.hidden(), unused);
  const Wide::Vector theta = net.parameters().cast<long double>();
  const Wide::Matrix zw = z.cast<long double>();
  const Wide::Vector tw = targets.cast<long double>();
  const auto l2w = static_cast<long double>(l2);

  double worst = 0.0;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    Wide::Vector plus = theta, minus = theta;
    plus[k] += h;
    minus[k] -= h;
    wide.set_parameters(plus);
    const long double up = wide.loss(zw, tw, l2w);
    wide.set_parameters(minus);
    const long double down = wide.loss(zw, tw, l2w);
    const auto numeric = static_cast<double>((up - down) / (2.0L * h));
    const double scale = std::max({std::abs(analytic[k]), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic[k] - numeric) / scale);
  }
  return worst;
}

}  // namespace gradcheck
