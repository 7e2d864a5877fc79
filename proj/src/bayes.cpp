#include "screening/bayes.hpp"

#include <cmath>

#include "screening/errors.hpp"

namespace screening {

namespace {

void require_fraction(double value, const char* field) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidArgument(field, "must be a fraction in [0, 1], got " + std::to_string(value));
  }
}

void require_population(double population_size) {
  if (!(population_size > 0.0) || !std::isfinite(population_size)) {
    throw InvalidArgument("population", "must be positive");
  }
}

std::optional<double> try_ppv(const TestCharacteristics& test, Prevalence prior) {
  try {
    return positive_predictive_value(test, prior);
  } catch (const UndefinedPosterior&) {
    return std::nullopt;
  }
}

std::optional<double> try_npv(const TestCharacteristics& test, Prevalence prior) {
  try {
    return negative_predictive_value(test, prior);
  } catch (const UndefinedPosterior&) {
    return std::nullopt;
  }
}

}  // namespace

TestCharacteristics::TestCharacteristics(double sensitivity, double specificity,
                                         std::string label_positive,
                                         std::string label_negative)
    : sensitivity_(sensitivity),
      specificity_(specificity),
      label_positive_(std::move(label_positive)),
      label_negative_(std::move(label_negative)) {
  require_fraction(sensitivity_, "sensitivity");
  require_fraction(specificity_, "specificity");
}

Prevalence::Prevalence(double value) : value_(value) { require_fraction(value_, "prior"); }

const char* outcome_name(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::TruePositive: return "TP";
    case Outcome::FalsePositive: return "FP";
    case Outcome::FalseNegative: return "FN";
    case Outcome::TrueNegative: return "TN";
  }
  return "?";
}

JointOutcomeMatrix joint_matrix(const TestCharacteristics& test, Prevalence prior) {
  const double p = prior.value();
  const double q = prior.complement();
  return {test.sensitivity() * p, test.false_positive_rate() * q,
          test.false_negative_rate() * p, test.specificity() * q};
}

double positive_predictive_value(const TestCharacteristics& test, Prevalence prior) {
  const auto joint = joint_matrix(test, prior);
  const double denominator = joint.tp + joint.fp;
  if (denominator == 0.0) {
    throw UndefinedPosterior("PPV undefined: P(+) = 0 at prior " +
                             std::to_string(prior.value()));
  }
  // An uninformative test (sensitivity + specificity == 1) leaves the prior unchanged.
  if (test.sensitivity() + test.specificity() == 1.0) return prior.value();
  return joint.tp / denominator;
}

double negative_predictive_value(const TestCharacteristics& test, Prevalence prior) {
  const auto joint = joint_matrix(test, prior);
  const double denominator = joint.tn + joint.fn;
  if (denominator == 0.0) {
    throw UndefinedPosterior("NPV undefined: P(-) = 0 at prior " +
                             std::to_string(prior.value()));
  }
  if (test.sensitivity() + test.specificity() == 1.0) return prior.complement();
  return joint.tn / denominator;
}

Prevalence breakeven_prior(const TestCharacteristics& test, double target_ppv) {
  if (!(target_ppv > 0.0 && target_ppv < 1.0)) {
    throw InvalidArgument("target_ppv", "must lie strictly inside (0, 1)");
  }
  if (!(test.sensitivity() > 0.0)) {
    throw InvalidArgument("sensitivity", "must be positive for a break-even prior");
  }
  const double fpr = test.false_positive_rate();
  if (fpr == 0.0) {
    throw Unreachable("test has no false positives: PPV is 1 for every prior > 0, "
                      "so the target is reachable for every prior > 0");
  }
  const double numerator = target_ppv * fpr;
  return Prevalence(numerator / (test.sensitivity() * (1.0 - target_ppv) + numerator));
}

SweepCurve prevalence_sweep(const TestCharacteristics& test, std::span<const double> grid) {
  if (grid.empty()) throw InvalidArgument("grid", "must not be empty");
  SweepCurve curve;
  curve.points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidArgument("grid", "priors must be strictly increasing");
    }
    const Prevalence prior(grid[i]);
    curve.points.push_back({prior.value(), try_ppv(test, prior), try_npv(test, prior)});
  }
  return curve;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw InvalidArgument("grid_points", "must be at least 1");
  if (!(lo > 0.0) || !(hi <= 1.0)) {
    throw InvalidArgument("grid_min", "log grid bounds must satisfy 0 < min <= max <= 1");
  }
  if (points > 1 && !(lo < hi)) {
    throw InvalidArgument("grid_max", "must exceed grid_min when more than one point is requested");
  }
  if (points == 1) return {lo};
  std::vector<double> grid(points);
  const double log_lo = std::log10(lo);
  const double step = (std::log10(hi) - log_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = std::pow(10.0, log_lo + step * static_cast<double>(i));
  }
  // Pin the endpoints so pow/log10 round-off cannot push them outside the bounds.
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

OutcomeCounts expected_counts(const TestCharacteristics& test, Prevalence prior,
                              double population_size) {
  require_population(population_size);
  const auto joint = joint_matrix(test, prior);
  return {joint.tp * population_size, joint.fp * population_size,
          joint.fn * population_size, joint.tn * population_size};
}

PosteriorReport posterior_report(const TestCharacteristics& test, Prevalence prior,
                                 double population_size) {
  PosteriorReport report;
  report.prior = prior;
  report.joint = joint_matrix(test, prior);
  report.p_positive = report.joint.p_positive();
  report.expected_counts = expected_counts(test, prior, population_size);
  report.population_size = population_size;
  report.ppv = try_ppv(test, prior);
  report.npv = try_npv(test, prior);
  return report;
}

EventTree build_event_tree(const TestCharacteristics& test, Prevalence prior,
                           double population_size) {
  require_population(population_size);
  const auto joint = joint_matrix(test, prior);

  const auto ppv = try_ppv(test, prior);
  const auto npv = try_npv(test, prior);
  auto complement = [](std::optional<double> v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return 1.0 - *v;
  };

  auto leaf = [&](const char* label, double conditional, double joint_probability,
                  Outcome outcome, std::optional<double> posterior) {
    EventNode node;
    node.label = label;
    node.probability = conditional;
    node.joint_probability = joint_probability;
    node.expected_count = joint_probability * population_size;
    node.outcome = outcome;
    node.posterior = posterior;
    return node;
  };

  EventNode positive_branch;
  positive_branch.label = test.label_positive();
  positive_branch.probability = prior.value();
  positive_branch.joint_probability = prior.value();
  positive_branch.expected_count = prior.value() * population_size;
  positive_branch.children = {
      leaf("+", test.sensitivity(), joint.tp, Outcome::TruePositive, ppv),
      leaf("-", test.false_negative_rate(), joint.fn, Outcome::FalseNegative, complement(npv))};

  EventNode negative_branch;
  negative_branch.label = test.label_negative();
  negative_branch.probability = prior.complement();
  negative_branch.joint_probability = prior.complement();
  negative_branch.expected_count = prior.complement() * population_size;
  negative_branch.children = {
      leaf("+", test.false_positive_rate(), joint.fp, Outcome::FalsePositive, complement(ppv)),
      leaf("-", test.specificity(), joint.tn, Outcome::TrueNegative, npv)};

  EventTree tree;
  tree.population_size = population_size;
  tree.root.label = "Population";
  tree.root.expected_count = population_size;
  tree.root.children = {std::move(positive_branch), std::move(negative_branch)};
  return tree;
}

std::vector<const EventNode*> EventTree::leaves() const {
  std::vector<const EventNode*> out;
  for (const auto& branch : root.children) {
    for (const auto& leaf : branch.children) out.push_back(&leaf);
  }
  return out;
}

}  // namespace screening
