#include "screening/scoring.hpp"

#include <cmath>

#include "screening/errors.hpp"

namespace screening {

void ScoringConfig::validate() const {
  if (!(theta_lo >= 0.0 && theta_lo <= 1.0)) throw InvalidArgument("theta_lo", "must lie in [0, 1]");
  if (!(theta_hi >= 0.0 && theta_hi <= 1.0)) throw InvalidArgument("theta_hi", "must lie in [0, 1]");
  if (theta_lo > theta_hi) throw InvalidArgument("theta_lo", "must not exceed theta_hi");
  if (!std::isfinite(decision_threshold)) {
    throw InvalidArgument("decision_threshold", "must be finite");
  }
}

QuestionScore score_question(std::span<const double> segment_scores, const ScoringConfig& config) {
  if (segment_scores.empty()) throw EmptyAnswer("answer has no segments");
  QuestionScore score;
  score.total = segment_scores.size();
  double sum = 0.0;
  for (const double d : segment_scores) {
    if (d > config.theta_lo && d < config.theta_hi) continue;
    sum += d;
    ++score.retained;
  }
  if (score.retained > 0) score.value = sum / static_cast<double>(score.retained);
  return score;
}

Label decide(double score, const ScoringConfig& config) noexcept {
  return score >= config.decision_threshold ? Label::Deception : Label::Truth;
}

ParticipantVerdict classify_participant(std::span<const QuestionScore> questions,
                                        const ScoringConfig& config) {
  ParticipantVerdict verdict;
  double sum = 0.0;
  for (const auto& q : questions) {
    if (!q.decided()) continue;
    sum += *q.value;
    ++verdict.decided_questions;
  }
  if (verdict.decided_questions == 0) throw AllUndecided("every question is undecided");
  verdict.mean_score = sum / static_cast<double>(verdict.decided_questions);
  verdict.label = decide(verdict.mean_score, config);
  verdict.tie = verdict.mean_score == config.decision_threshold;
  return verdict;
}

}  // namespace screening
