#pragma once

// Aggregation of segment scores d_n into question scores D_q and of question
// scores into a participant verdict.

#include <cstddef>
#include <optional>
#include <span>

#include "screening/dataset.hpp"

namespace screening {

/// Segment scores strictly inside (theta_lo, theta_hi) are treated as
/// ambiguous and dropped before averaging.
struct ScoringConfig {
  double theta_lo = 0.4;
  double theta_hi = 0.6;
  double decision_threshold = 0.5;

  void validate() const;
};

struct QuestionScore {
  std::optional<double> value;  // empty when every segment was filtered (Undecided)
  std::size_t retained = 0;
  std::size_t total = 0;

  bool decided() const noexcept { return value.has_value(); }
};

/// Throws EmptyAnswer when `segment_scores` is empty.
QuestionScore score_question(std::span<const double> segment_scores, const ScoringConfig& config);

/// Deception when score >= threshold (ties go to Deception).
Label decide(double score, const ScoringConfig& config) noexcept;

struct ParticipantVerdict {
  Label label = Label::Truth;
  double mean_score = 0.0;
  std::size_t decided_questions = 0;
  bool tie = false;  // mean exactly equal to the threshold
};

/// Mean of decided question scores against the threshold.
/// Throws AllUndecided when no question is decided.
ParticipantVerdict classify_participant(std::span<const QuestionScore> questions,
                                        const ScoringConfig& config);

}  // namespace screening
