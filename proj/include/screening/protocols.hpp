#pragma once

// Evaluation protocols for the segment classifier.
//
// GroupedLeaveOnePairOut holds out one truthful and one deceptive participant
// per fold and trains on everybody else. LeakedSplit draws segment-level
// folds stratified by label, so the same person appears on both sides of the
// split. Accuracy is reported per question: a held-out answer counts as
// correct when its filtered score D_q lands on the participant's side of the
// decision threshold; Undecided answers count as errors.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "screening/classifier.hpp"
#include "screening/dataset.hpp"
#include "screening/scoring.hpp"

namespace screening {

enum class Protocol { GroupedLeaveOnePairOut, LeakedSplit };

const char* protocol_name(Protocol protocol) noexcept;

struct ProtocolOptions {
  int grouped_folds = 9;
  int leaked_folds = 10;
  std::size_t threads = 0;  // 0 = hardware concurrency; never changes results

  void validate() const;
};

struct FoldResult {
  int fold = 0;
  double truthful_accuracy = 0.0;   // percent
  double deceptive_accuracy = 0.0;  // percent
  std::size_t truthful_questions = 0;
  std::size_t deceptive_questions = 0;
  std::size_t undecided_questions = 0;
  // Grouped protocol only: ids of the held-out pair and their verdicts.
  std::vector<int> held_out;
  std::vector<std::optional<Label>> verdicts;  // empty when every answer was Undecided
  std::size_t verdict_ties = 0;
  double final_training_loss = 0.0;
};

struct ProtocolSummary {
  Protocol protocol = Protocol::GroupedLeaveOnePairOut;
  std::vector<FoldResult> folds;
  double truthful_mean = 0.0;
  double deceptive_mean = 0.0;
  double truthful_std = 0.0;  // sample standard deviation (n - 1)
  double deceptive_std = 0.0;

  /// Recomputes the means and standard deviations from `folds`.
  void summarise();
};

ProtocolSummary evaluate_grouped_loo(const SyntheticDataset& dataset, const Hyperparams& hyperparams,
                                     const ScoringConfig& scoring, const ProtocolOptions& options = {});

ProtocolSummary evaluate_leaked(const SyntheticDataset& dataset, const Hyperparams& hyperparams,
                                const ScoringConfig& scoring, const ProtocolOptions& options = {});

struct ProtocolGap {
  double truthful_inflation = 0.0;   // leaked mean - grouped mean, percentage points
  double deceptive_inflation = 0.0;
  double truthful_std_change = 0.0;  // leaked std - grouped std
  double deceptive_std_change = 0.0;
  double threshold = 5.0;
  bool leakage_flag = false;  // some class inflates by more than `threshold`
};

ProtocolGap compare_protocols(const ProtocolSummary& grouped, const ProtocolSummary& leaked,
                              double threshold_pp = 5.0);

/// Scores every (participant, question) answer present in `rows` of `dataset`
/// with `model`, returning per-class correct/total counts. Exposed for tests.
struct AnswerTally {
  std::size_t truthful_correct = 0;
  std::size_t truthful_total = 0;
  std::size_t deceptive_correct = 0;
  std::size_t deceptive_total = 0;
  std::size_t undecided = 0;
  std::vector<std::pair<int, QuestionScore>> answers;  // (participant id, D_q) in (id, question) order
};

AnswerTally tally_answers(const ClassifierModel& model, const SyntheticDataset& dataset,
                          const std::vector<std::size_t>& rows, const ScoringConfig& scoring);

}  // namespace screening
