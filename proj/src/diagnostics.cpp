#include "screening/diagnostics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace screening {

namespace {

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  return buffer;
}

}  // namespace

DimensionalityCheck curse_of_dimensionality_check(std::size_t n_groups, std::size_t n_features) {
  if (n_groups == 0) throw InvalidArgument("n_groups", "must be positive");
  if (n_features == 0) throw InvalidArgument("n_features", "must be positive");
  return {n_groups < n_features, static_cast<double>(n_groups) / static_cast<double>(n_features)};
}

IccEstimate intraclass_correlation(const SyntheticDataset& dataset) {
  return intraclass_correlation(dataset.features, std::span<const int>(dataset.participant_ids));
}

double effective_sample_size(double n_segments, double n_groups, double icc) {
  if (!(n_groups >= 1.0)) throw InvalidArgument("n_groups", "must be at least 1");
  if (!(n_segments >= n_groups)) throw InvalidArgument("n_segments", "must be at least n_groups");
  if (!(icc >= -1.0 && icc <= 1.0)) throw InvalidArgument("icc", "must lie in [-1, 1]");
  const double rho = std::max(icc, 0.0);
  if (rho == 0.0) return n_segments;
  if (rho == 1.0) return n_groups;
  const double m = n_segments / n_groups;
  return n_segments / (1.0 + (m - 1.0) * rho);
}

DiagnosticReport diagnose(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> groups,
                          std::size_t held_out_groups) {
  const std::set<int> distinct(groups.begin(), groups.end());
  if (held_out_groups >= distinct.size()) {
    throw InsufficientGroups("holding out " + std::to_string(held_out_groups) + " of " +
                             std::to_string(distinct.size()) + " groups leaves none for training");
  }
  DiagnosticReport report;
  report.total_groups = distinct.size();
  report.total_segments = groups.size();
  report.n_groups = distinct.size() - held_out_groups;
  report.n_features = static_cast<std::size_t>(features.cols());

  const auto cod = curse_of_dimensionality_check(report.n_groups, report.n_features);
  report.cod_flag = cod.flagged;
  report.group_feature_ratio = cod.ratio;

  const auto icc = intraclass_correlation(features, groups);
  report.icc = icc.icc;
  report.effective_sample_size = effective_sample_size(static_cast<double>(report.total_segments),
                                                       static_cast<double>(report.total_groups), icc.icc);

  if (report.cod_flag) {
    report.notes.push_back("curse of dimensionality: " + std::to_string(report.n_groups) +
                           " training groups < " + std::to_string(report.n_features) + " features");
  } else {
    report.notes.push_back("training groups (" + std::to_string(report.n_groups) +
                           ") are not fewer than features (" + std::to_string(report.n_features) + ")");
  }
  if (report.icc > 0.05) {
    report.notes.push_back("segments within a group are correlated (ICC " + fixed(report.icc, 3) +
                           "); rows are not i.i.d.");
  } else if (report.icc < 0.0) {
    report.notes.push_back("negative ICC estimate " + fixed(report.icc, 3) +
                           "; effective sample size uses ICC 0");
  }
  report.notes.push_back(std::to_string(report.total_segments) + " segments carry the information of about " +
                         fixed(report.effective_sample_size, 1) + " independent observations");
  return report;
}

DiagnosticReport diagnose(const SyntheticDataset& dataset, std::size_t held_out_groups) {
  return diagnose(dataset.features, std::span<const int>(dataset.participant_ids), held_out_groups);
}

}  // namespace screening
