#pragma once

// Bayesian algebra for binary screening tests: joint outcome probabilities,
// posterior predictive values, expected counts and break-even priors.
//
// Every quantity is a fraction in [0, 1]. Nothing here rounds; rounding is a
// rendering concern (see report.hpp).

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace screening {

/// Conditional performance of a binary test.
///
/// sensitivity = P(+ | positive class), specificity = P(- | negative class).
class TestCharacteristics {
 public:
  TestCharacteristics(double sensitivity, double specificity,
                      std::string label_positive = "Lie",
                      std::string label_negative = "No-lie");

  double sensitivity() const noexcept { return sensitivity_; }
  double specificity() const noexcept { return specificity_; }
  double false_positive_rate() const noexcept { return 1.0 - specificity_; }
  double false_negative_rate() const noexcept { return 1.0 - sensitivity_; }

  const std::string& label_positive() const noexcept { return label_positive_; }
  const std::string& label_negative() const noexcept { return label_negative_; }

  /// sensitivity + specificity > 1.
  bool informative() const noexcept { return sensitivity_ + specificity_ > 1.0; }

 private:
  double sensitivity_;
  double specificity_;
  std::string label_positive_;
  std::string label_negative_;
};

/// Base rate of the positive class. The complement is derived, never stored.
class Prevalence {
 public:
  explicit Prevalence(double value);

  double value() const noexcept { return value_; }
  double complement() const noexcept { return 1.0 - value_; }

 private:
  double value_;
};

struct JointOutcomeMatrix {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  double tn = 0.0;

  double p_positive() const noexcept { return tp + fp; }
  double p_negative() const noexcept { return fn + tn; }
  double total() const noexcept { return tp + fp + fn + tn; }
};

/// Real-valued expected outcome counts for a finite population.
struct OutcomeCounts {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  double tn = 0.0;

  double total() const noexcept { return tp + fp + fn + tn; }
  double referrals() const noexcept { return tp + fp; }
};

struct PosteriorReport {
  Prevalence prior{0.0};
  JointOutcomeMatrix joint;
  std::optional<double> ppv;  // empty when P(+) = 0
  std::optional<double> npv;  // empty when P(-) = 0
  double p_positive = 0.0;
  OutcomeCounts expected_counts;
  double population_size = 0.0;
};

struct SweepPoint {
  double prior = 0.0;
  std::optional<double> ppv;
  std::optional<double> npv;
};

struct SweepCurve {
  std::vector<SweepPoint> points;
};

enum class Outcome { TruePositive, FalsePositive, FalseNegative, TrueNegative };

const char* outcome_name(Outcome outcome) noexcept;

/// Node of the two-level screening event tree.
///
/// `probability` is conditional on the parent; `joint_probability` is
/// unconditional. Leaves carry the outcome and the posterior of the leaf's
/// condition given its test result (PPV at TP, NPV at TN, their complements
/// at FP and FN). The posterior is empty when the test result has
/// probability zero.
struct EventNode {
  std::string label;
  double probability = 1.0;
  double joint_probability = 1.0;
  double expected_count = 0.0;
  std::optional<Outcome> outcome;
  std::optional<double> posterior;
  std::vector<EventNode> children;

  bool is_leaf() const noexcept { return children.empty(); }
};

struct EventTree {
  double population_size = 0.0;
  EventNode root;

  /// Leaves in TP, FN, FP, TN order (condition-major).
  std::vector<const EventNode*> leaves() const;
};

JointOutcomeMatrix joint_matrix(const TestCharacteristics& test, Prevalence prior);

/// P(positive class | +). Throws UndefinedPosterior when P(+) = 0.
double positive_predictive_value(const TestCharacteristics& test, Prevalence prior);

/// P(negative class | -). Throws UndefinedPosterior when P(-) = 0.
double negative_predictive_value(const TestCharacteristics& test, Prevalence prior);

/// Smallest prior at which the PPV reaches `target_ppv`.
///
/// Requires 0 < target_ppv < 1 and sensitivity > 0. A test with no false
/// positives reaches any target at every prior > 0; the infimum 0 is not
/// attained, so that case throws Unreachable.
Prevalence breakeven_prior(const TestCharacteristics& test, double target_ppv);

/// One point per grid entry; undefined posteriors are carried as empty values.
/// The grid must be non-empty, strictly increasing and inside [0, 1].
SweepCurve prevalence_sweep(const TestCharacteristics& test, std::span<const double> grid);

/// `points` priors spaced evenly in log10 between lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

OutcomeCounts expected_counts(const TestCharacteristics& test, Prevalence prior,
                              double population_size);

PosteriorReport posterior_report(const TestCharacteristics& test, Prevalence prior,
                                 double population_size);

EventTree build_event_tree(const TestCharacteristics& test, Prevalence prior,
                           double population_size);

}  // namespace screening
