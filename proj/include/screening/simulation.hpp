#pragma once

// Monte Carlo screening of a finite population: an empirical counterpart to
// the joint outcome matrix.

#include <cstdint>
#include <optional>
#include <vector>

#include "screening/bayes.hpp"

namespace screening {

struct SimulationConfig {
  TestCharacteristics test{0.5, 0.5};
  Prevalence prior{0.0};
  std::int64_t population_size = 1;
  std::int64_t replicates = 1;
  std::uint64_t master_seed = 0;
  std::size_t threads = 0;  // 0 = hardware concurrency; never changes results

  void validate() const;
};

struct ReplicateCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const noexcept { return tp + fp + fn + tn; }
  std::int64_t referrals() const noexcept { return tp + fp; }
};

/// Estimate with a 95% normal-approximation interval, clipped to [0, 1].
/// The approximation breaks down near 0 and 1 and for small denominators.
struct Proportion {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::int64_t denominator = 0;
};

struct SimulationResult {
  std::vector<ReplicateCounts> replicates;
  OutcomeCounts mean_counts;
  JointOutcomeMatrix empirical_joint;  // pooled frequencies
  std::optional<Proportion> ppv;       // empty when nobody tested positive
  std::optional<Proportion> npv;       // empty when nobody tested negative
  double mean_referrals = 0.0;
};

SimulationResult simulate_screening(const SimulationConfig& config);

/// Expected number of people routed to a human interview: N * P(+).
double secondary_screening_load(const TestCharacteristics& test, Prevalence prior,
                                double population_size);

}  // namespace screening
