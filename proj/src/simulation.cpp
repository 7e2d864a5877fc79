#include "screening/simulation.hpp"

#include <cmath>
#include <random>

#include "screening/errors.hpp"
#include "screening/parallel.hpp"
#include "screening/rng.hpp"

namespace screening {

namespace {

ReplicateCounts draw_replicate(const SimulationConfig& config, std::uint64_t index) {
  auto engine = make_engine(config.master_seed, index);
  const std::int64_t n = config.population_size;
  using Binomial = std::binomial_distribution<std::int64_t>;

  const std::int64_t positives = Binomial(n, config.prior.value())(engine);
  const std::int64_t negatives = n - positives;
  ReplicateCounts counts;
  counts.tp = Binomial(positives, config.test.sensitivity())(engine);
  counts.fn = positives - counts.tp;
  counts.tn = Binomial(negatives, config.test.specificity())(engine);
  counts.fp = negatives - counts.tn;
  return counts;
}

std::optional<Proportion> proportion(std::int64_t hits, std::int64_t total) {
  if (total == 0) return std::nullopt;
  const double p = static_cast<double>(hits) / static_cast<double>(total);
  const double half_width = 1.959963984540054 * std::sqrt(p * (1.0 - p) / static_cast<double>(total));
  return Proportion{p, std::max(0.0, p - half_width), std::min(1.0, p + half_width), total};
}

}  // namespace

void SimulationConfig::validate() const {
  if (population_size < 1) throw InvalidArgument("population", "must be at least 1");
  if (replicates < 1) throw InvalidArgument("replicates", "must be at least 1");
}

SimulationResult simulate_screening(const SimulationConfig& config) {
  config.validate();
  SimulationResult result;
  result.replicates.resize(static_cast<std::size_t>(config.replicates));
  parallel_for(
      result.replicates.size(),
      [&](std::size_t i) { result.replicates[i] = draw_replicate(config, i); },
      config.threads);

  // Merge in replicate order.
  ReplicateCounts pooled;
  for (const auto& r : result.replicates) {
    pooled.tp += r.tp;
    pooled.fp += r.fp;
    pooled.fn += r.fn;
    pooled.tn += r.tn;
  }
  const double reps = static_cast<double>(config.replicates);
  const double persons = reps * static_cast<double>(config.population_size);
  result.mean_counts = {pooled.tp / reps, pooled.fp / reps, pooled.fn / reps, pooled.tn / reps};
  result.empirical_joint = {pooled.tp / persons, pooled.fp / persons, pooled.fn / persons,
                            pooled.tn / persons};
  result.ppv = proportion(pooled.tp, pooled.tp + pooled.fp);
  result.npv = proportion(pooled.tn, pooled.tn + pooled.fn);
  result.mean_referrals = pooled.referrals() / reps;
  return result;
}

double secondary_screening_load(const TestCharacteristics& test, Prevalence prior,
                                double population_size) {
  return expected_counts(test, prior, population_size).referrals();
}

}  // namespace screening
