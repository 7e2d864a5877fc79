#include "screening/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "screening/errors.hpp"
#include "screening/parallel.hpp"
#include "screening/rng.hpp"

namespace screening {

namespace {

constexpr std::uint64_t kPairingStream = 0x5041495253ULL;
constexpr std::uint64_t kLeakedSplitStream = 0x53504C4954ULL;
constexpr std::uint64_t kGroupedModelBase = 1;
constexpr std::uint64_t kLeakedModelBase = 1'000'001;

double percent(std::size_t correct, std::size_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

void mean_and_std(const std::vector<double>& values, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (values.empty()) return;
  mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() < 2) return;
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
}

ClassifierModel train_on_rows(const SyntheticDataset& dataset, const std::vector<std::size_t>& rows,
                              const Hyperparams& hyperparams, std::uint64_t seed) {
  Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()), dataset.features.cols());
  std::vector<Label> labels(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    features.row(static_cast<Eigen::Index>(i)) = dataset.features.row(static_cast<Eigen::Index>(rows[i]));
    labels[i] = dataset.labels[rows[i]];
  }
  return train_classifier(features, labels, hyperparams, seed);
}

void require_roles(const SyntheticDataset& dataset, std::vector<int>& truthful, std::vector<int>& deceptive) {
  for (const auto& p : dataset.participants) {
    (p.role == Role::Deceptive ? deceptive : truthful).push_back(p.id);
  }
  if (truthful.size() < 2 || deceptive.size() < 2) {
    throw InsufficientParticipants("grouped protocol needs at least 2 participants per role, got " +
                                   std::to_string(truthful.size()) + " truthful and " +
                                   std::to_string(deceptive.size()) + " deceptive");
  }
}

}  // namespace

const char* protocol_name(Protocol protocol) noexcept {
  return protocol == Protocol::GroupedLeaveOnePairOut ? "grouped_leave_one_pair_out" : "leaked_split";
}

void ProtocolOptions::validate() const {
  if (grouped_folds < 1) throw InvalidArgument("grouped_folds", "must be at least 1");
  if (leaked_folds < 2) throw InvalidArgument("leaked_folds", "must be at least 2");
}

void ProtocolSummary::summarise() {
  std::vector<double> truthful, deceptive;
  for (const auto& f : folds) {
    truthful.push_back(f.truthful_accuracy);
    deceptive.push_back(f.deceptive_accuracy);
  }
  mean_and_std(truthful, truthful_mean, truthful_std);
  mean_and_std(deceptive, deceptive_mean, deceptive_std);
}

AnswerTally tally_answers(const ClassifierModel& model, const SyntheticDataset& dataset,
                          const std::vector<std::size_t>& rows, const ScoringConfig& scoring) {
  Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()), dataset.features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    features.row(static_cast<Eigen::Index>(i)) = dataset.features.row(static_cast<Eigen::Index>(rows[i]));
  }
  const Eigen::VectorXd scores = model.predict(features);

  std::map<std::pair<int, int>, std::vector<double>> answers;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    answers[{dataset.participant_ids[rows[i]], dataset.question_indices[rows[i]]}].push_back(
        scores[static_cast<Eigen::Index>(i)]);
  }

  AnswerTally tally;
  for (const auto& [key, segment_scores] : answers) {
    const Label truth = directed_label(dataset.participant(key.first).role);
    const auto q = score_question(segment_scores, scoring);
    const bool correct = q.decided() && decide(*q.value, scoring) == truth;
    tally.answers.emplace_back(key.first, q);
    if (!q.decided()) ++tally.undecided;
    if (truth == Label::Deception) {
      ++tally.deceptive_total;
      tally.deceptive_correct += correct ? 1 : 0;
    } else {
      ++tally.truthful_total;
      tally.truthful_correct += correct ? 1 : 0;
    }
  }
  return tally;
}

ProtocolSummary evaluate_grouped_loo(const SyntheticDataset& dataset, const Hyperparams& hyperparams,
                                     const ScoringConfig& scoring, const ProtocolOptions& options) {
  hyperparams.validate();
  scoring.validate();
  options.validate();
  std::vector<int> truthful, deceptive;
  require_roles(dataset, truthful, deceptive);

  {
    auto engine = make_engine(hyperparams.seed, kPairingStream);
    std::shuffle(truthful.begin(), truthful.end(), engine);
    std::shuffle(deceptive.begin(), deceptive.end(), engine);
  }

  ProtocolSummary summary;
  summary.protocol = Protocol::GroupedLeaveOnePairOut;
  summary.folds.resize(static_cast<std::size_t>(options.grouped_folds));

  parallel_for(
      summary.folds.size(),
      [&](std::size_t k) {
        const int t_id = truthful[k % truthful.size()];
        const int d_id = deceptive[k % deceptive.size()];
        std::vector<std::size_t> train, test_t, test_d;
        for (std::size_t r = 0; r < dataset.size(); ++r) {
          const int id = dataset.participant_ids[r];
          if (id == t_id) {
            test_t.push_back(r);
          } else if (id == d_id) {
            test_d.push_back(r);
          } else {
            train.push_back(r);
          }
        }
        const auto model = train_on_rows(dataset, train, hyperparams, derive_seed(hyperparams.seed, kGroupedModelBase + k));

        FoldResult fold;
        fold.fold = static_cast<int>(k) + 1;
        fold.final_training_loss = model.final_loss;
        fold.held_out = {t_id, d_id};
        for (const auto* rows : {&test_t, &test_d}) {
          const auto tally = tally_answers(model, dataset, *rows, scoring);
          fold.truthful_questions += tally.truthful_total;
          fold.deceptive_questions += tally.deceptive_total;
          fold.undecided_questions += tally.undecided;
          if (rows == &test_t) {
            fold.truthful_accuracy = percent(tally.truthful_correct, tally.truthful_total);
          } else {
            fold.deceptive_accuracy = percent(tally.deceptive_correct, tally.deceptive_total);
          }

          std::vector<QuestionScore> questions;
          for (const auto& [id, q] : tally.answers) questions.push_back(q);
          try {
            const auto verdict = classify_participant(questions, scoring);
            fold.verdicts.push_back(verdict.label);
            fold.verdict_ties += verdict.tie ? 1 : 0;
          } catch (const AllUndecided&) {
            fold.verdicts.push_back(std::nullopt);
          }
        }
        summary.folds[k] = std::move(fold);
      },
      options.threads);

  summary.summarise();
  return summary;
}

ProtocolSummary evaluate_leaked(const SyntheticDataset& dataset, const Hyperparams& hyperparams,
                                const ScoringConfig& scoring, const ProtocolOptions& options) {
  hyperparams.validate();
  scoring.validate();
  options.validate();
  const auto k = static_cast<std::size_t>(options.leaked_folds);

  // Stratified assignment: shuffle each label's rows and deal them round-robin.
  std::vector<int> fold_of(dataset.size(), 0);
  {
    auto engine = make_engine(hyperparams.seed, kLeakedSplitStream);
    for (const Label label : {Label::Truth, Label::Deception}) {
      std::vector<std::size_t> rows;
      for (std::size_t r = 0; r < dataset.size(); ++r) {
        if (dataset.labels[r] == label) rows.push_back(r);
      }
      std::shuffle(rows.begin(), rows.end(), engine);
      for (std::size_t i = 0; i < rows.size(); ++i) fold_of[rows[i]] = static_cast<int>(i % k);
    }
  }

  ProtocolSummary summary;
  summary.protocol = Protocol::LeakedSplit;
  summary.folds.resize(k);
  parallel_for(
      k,
      [&](std::size_t f) {
        std::vector<std::size_t> train, test;
        for (std::size_t r = 0; r < dataset.size(); ++r) {
          (fold_of[r] == static_cast<int>(f) ? test : train).push_back(r);
        }
        const auto model = train_on_rows(dataset, train, hyperparams, derive_seed(hyperparams.seed, kLeakedModelBase + f));
        const auto tally = tally_answers(model, dataset, test, scoring);
        FoldResult fold;
        fold.fold = static_cast<int>(f) + 1;
        fold.final_training_loss = model.final_loss;
        fold.truthful_accuracy = percent(tally.truthful_correct, tally.truthful_total);
        fold.deceptive_accuracy = percent(tally.deceptive_correct, tally.deceptive_total);
        fold.truthful_questions = tally.truthful_total;
        fold.deceptive_questions = tally.deceptive_total;
        fold.undecided_questions = tally.undecided;
        summary.folds[f] = std::move(fold);
      },
      options.threads);

  summary.summarise();
  return summary;
}

ProtocolGap compare_protocols(const ProtocolSummary& grouped, const ProtocolSummary& leaked,
                              double threshold_pp) {
  ProtocolGap gap;
  gap.truthful_inflation = leaked.truthful_mean - grouped.truthful_mean;
  gap.deceptive_inflation = leaked.deceptive_mean - grouped.deceptive_mean;
  gap.truthful_std_change = leaked.truthful_std - grouped.truthful_std;
  gap.deceptive_std_change = leaked.deceptive_std - grouped.deceptive_std;
  gap.threshold = threshold_pp;
  gap.leakage_flag = gap.truthful_inflation > threshold_pp || gap.deceptive_inflation > threshold_pp;
  return gap;
}

}  // namespace screening
