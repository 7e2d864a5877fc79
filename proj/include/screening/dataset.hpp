#pragma once

// Synthetic replica of a person-grouped deception-detection dataset.
//
// Generative model, per feature j (the last feature is a binary gender bit):
//
//   x = person_effect[j] + label_sign * class_effect_scale / 2 * direction[j] + noise
//
// person_effect ~ N(0, person_effect_scale^2) is drawn once per participant,
// direction ~ N(0, 1) once per dataset, noise ~ N(0, noise_scale^2) per
// segment, and label_sign is +1 for Deception and -1 for Truth. Segments of
// one participant share the person effect, so they are not independent
// whenever person_effect_scale > 0.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace screening {

enum class Label { Truth = 0, Deception = 1 };
enum class Role { Truthful, Deceptive };

const char* label_name(Label label) noexcept;
const char* role_name(Role role) noexcept;
Label directed_label(Role role) noexcept;

struct DatasetSpec {
  int n_participants = 32;
  int n_deceptive = 16;
  int n_features = 38;
  int n_questions = 13;
  std::int64_t target_total_vectors = 86'586;
  double person_effect_scale = 1.0;
  double class_effect_scale = 0.25;
  double noise_scale = 1.0;
  std::uint64_t seed = 20190601;

  /// Throws InvalidSpec naming the first violated field.
  void validate() const;

  /// round(target_total_vectors / (n_participants * n_questions)), at least 1.
  int segments_per_answer() const;
};

struct Participant {
  int id = 0;
  Role role = Role::Truthful;
  int gender = 0;  // 1 = male, 0 = female
  std::string demographic;
};

struct SegmentVector {
  int participant_id = 0;
  int question_index = 1;
  Eigen::VectorXd features;
  Label label = Label::Truth;
};

/// Row-major segment table: row i of `features` belongs to participant
/// `participant_ids[i]`, question `question_indices[i]` and carries `labels[i]`.
struct SyntheticDataset {
  std::vector<Participant> participants;
  Eigen::MatrixXd features;
  std::vector<int> participant_ids;
  std::vector<int> question_indices;
  std::vector<Label> labels;
  int n_questions = 0;

  std::size_t size() const noexcept { return labels.size(); }
  int n_features() const noexcept { return static_cast<int>(features.cols()); }
  SegmentVector segment(std::size_t row) const;
  const Participant& participant(int id) const;

  /// Checks the cross-references between segments and participants.
  void validate() const;
};

SyntheticDataset generate_synthetic_dataset(const DatasetSpec& spec);

/// Returns a copy of `dataset` containing only the listed rows.
SyntheticDataset select_rows(const SyntheticDataset& dataset, const std::vector<std::size_t>& rows);

/// CSV with header participant_id,question,label,f1..fK. Labels are written
/// as "Deception" / "Truth"; features in shortest round-trip form.
void write_dataset_csv(std::ostream& out, const SyntheticDataset& dataset);

/// Reads the CSV written by write_dataset_csv. Participant roles are taken
/// from their labels; a participant with any Deception segment is Deceptive.
/// The gender bit is read from the last feature column when it is 0 or 1.
SyntheticDataset read_dataset_csv(std::istream& in);

}  // namespace screening
