#pragma once

// Statistical diagnostics for person-grouped training data: sparsity relative
// to dimension, within-person correlation and the resulting effective sample
// size.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "screening/dataset.hpp"
#include "screening/errors.hpp"

namespace screening {

struct DimensionalityCheck {
  bool flagged = false;  // fewer independent groups than feature dimensions
  double ratio = 0.0;    // n_groups / n_features
};

DimensionalityCheck curse_of_dimensionality_check(std::size_t n_groups, std::size_t n_features);

struct IccEstimate {
  double icc = 0.0;                  // mean over informative features, clamped to [-1, 1]
  Eigen::VectorXd per_feature;       // NaN where the feature has no variance at all
  std::size_t informative_features = 0;
  std::size_t n_groups = 0;
  double mean_group_size = 0.0;
};

/// One-way random-effects ICC(1) per feature column,
///
///   (MS_between - MS_within) / (MS_between + (m - 1) * MS_within),
///
/// with m the mean group size, averaged over the features that vary.
/// Requires at least 2 groups with at least 2 rows each.
template <typename Derived>
IccEstimate intraclass_correlation(const Eigen::MatrixBase<Derived>& features, std::span<const int> groups) {
  using Scalar = typename Derived::Scalar;
  if (static_cast<std::size_t>(features.rows()) != groups.size()) {
    throw InvalidArgument("groups", "one group id per row is required");
  }
  std::map<int, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < groups.size(); ++i) members[groups[i]].push_back(static_cast<Eigen::Index>(i));
  if (members.size() < 2) throw InsufficientGroups("ICC needs at least 2 groups");
  for (const auto& [id, rows] : members) {
    if (rows.size() < 2) {
      throw InsufficientGroups("ICC needs at least 2 rows in every group; group " + std::to_string(id) +
                               " has " + std::to_string(rows.size()));
    }
  }

  const auto n = static_cast<double>(features.rows());
  const auto k = static_cast<double>(members.size());
  const double m = n / k;
  const Eigen::Index cols = features.cols();

  IccEstimate out;
  out.n_groups = members.size();
  out.mean_group_size = m;
  out.per_feature = Eigen::VectorXd::Constant(cols, std::nan(""));

  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> grand = features.colwise().mean();
  Eigen::ArrayXd ss_between = Eigen::ArrayXd::Zero(cols);
  Eigen::ArrayXd ss_within = Eigen::ArrayXd::Zero(cols);
  for (const auto& [id, rows] : members) {
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> group_mean = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>::Zero(cols);
    for (const auto r : rows) group_mean += features.row(r);
    group_mean /= static_cast<Scalar>(rows.size());
    const auto shift = (group_mean - grand).template cast<double>().array();
    ss_between += static_cast<double>(rows.size()) * shift.square();
    for (const auto r : rows) {
      ss_within += (features.row(r) - group_mean).template cast<double>().array().square();
    }
  }
  const Eigen::ArrayXd ms_between = ss_between / (k - 1.0);
  const Eigen::ArrayXd ms_within = ss_within / (n - k);

  double sum = 0.0;
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double denominator = ms_between[j] + (m - 1.0) * ms_within[j];
    if (!(denominator > 0.0)) continue;
    const double icc = std::clamp((ms_between[j] - ms_within[j]) / denominator, -1.0, 1.0);
    out.per_feature[j] = icc;
    sum += icc;
    ++out.informative_features;
  }
  if (out.informative_features == 0) throw InsufficientGroups("no feature varies across rows");
  out.icc = std::clamp(sum / static_cast<double>(out.informative_features), -1.0, 1.0);
  return out;
}

IccEstimate intraclass_correlation(const SyntheticDataset& dataset);

/// n_segments / (1 + (m - 1) * max(icc, 0)) with m = n_segments / n_groups.
double effective_sample_size(double n_segments, double n_groups, double icc);

struct DiagnosticReport {
  std::size_t n_groups = 0;  // independent groups available for training
  std::size_t n_features = 0;
  bool cod_flag = false;
  double group_feature_ratio = 0.0;
  double icc = 0.0;
  double effective_sample_size = 0.0;
  std::size_t total_segments = 0;
  std::size_t total_groups = 0;
  std::vector<std::string> notes;
};

/// Diagnoses a grouped table. `held_out_groups` are reserved for testing and
/// do not count towards the training groups compared against the dimension.
DiagnosticReport diagnose(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> groups,
                          std::size_t held_out_groups = 2);

DiagnosticReport diagnose(const SyntheticDataset& dataset, std::size_t held_out_groups = 2);

}  // namespace screening
