#include "screening/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include "screening/csv.hpp"
#include "screening/errors.hpp"
#include "screening/rng.hpp"

namespace screening {

namespace {

constexpr std::uint64_t kDirectionStream = 0;
constexpr std::uint64_t kMetadataStream = 1;
constexpr std::uint64_t kParticipantStreamBase = 1000;

// Composition reported for the original 32 actors; scaled to other sizes.
constexpr double kAsianArabicShare = 10.0 / 32.0;
constexpr double kMaleShare = 22.0 / 32.0;

}  // namespace

const char* label_name(Label label) noexcept {
  return label == Label::Deception ? "Deception" : "Truth";
}

const char* role_name(Role role) noexcept {
  return role == Role::Deceptive ? "Deceptive" : "Truthful";
}

Label directed_label(Role role) noexcept {
  return role == Role::Deceptive ? Label::Deception : Label::Truth;
}

void DatasetSpec::validate() const {
  if (n_participants < 1) throw InvalidSpec("n_participants", "must be at least 1");
  if (n_deceptive < 0 || n_deceptive > n_participants) {
    throw InvalidSpec("n_deceptive", "must lie in [0, n_participants]");
  }
  if (n_features < 2) {
    throw InvalidSpec("n_features", "must be at least 2 (one is the gender bit)");
  }
  if (n_questions < 1) throw InvalidSpec("n_questions", "must be at least 1");
  if (target_total_vectors < static_cast<std::int64_t>(n_participants) * n_questions) {
    throw InvalidSpec("target_total_vectors", "must be at least n_participants * n_questions");
  }
  if (!(person_effect_scale >= 0.0) || !std::isfinite(person_effect_scale)) {
    throw InvalidSpec("person_effect_scale", "must be a finite non-negative number");
  }
  if (!(class_effect_scale >= 0.0) || !std::isfinite(class_effect_scale)) {
    throw InvalidSpec("class_effect_scale", "must be a finite non-negative number");
  }
  if (!(noise_scale > 0.0) || !std::isfinite(noise_scale)) {
    throw InvalidSpec("noise_scale", "must be a finite positive number");
  }
}

int DatasetSpec::segments_per_answer() const {
  const double answers = static_cast<double>(n_participants) * n_questions;
  return std::max(1, static_cast<int>(std::lround(static_cast<double>(target_total_vectors) / answers)));
}

SegmentVector SyntheticDataset::segment(std::size_t row) const {
  return {participant_ids.at(row), question_indices.at(row), features.row(static_cast<Eigen::Index>(row)).transpose(),
          labels.at(row)};
}

const Participant& SyntheticDataset::participant(int id) const {
  const auto it = std::find_if(participants.begin(), participants.end(),
                               [id](const Participant& p) { return p.id == id; });
  if (it == participants.end()) {
    throw InvalidArgument("participant_id", "unknown participant " + std::to_string(id));
  }
  return *it;
}

void SyntheticDataset::validate() const {
  const std::size_t n = labels.size();
  if (participant_ids.size() != n || question_indices.size() != n ||
      static_cast<std::size_t>(features.rows()) != n) {
    throw InvalidArgument("dataset", "segment columns have mismatched lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    participant(participant_ids[i]);
    if (question_indices[i] < 1 || question_indices[i] > n_questions) {
      throw InvalidArgument("question", "index out of range at row " + std::to_string(i));
    }
  }
}

SyntheticDataset generate_synthetic_dataset(const DatasetSpec& spec) {
  spec.validate();
  const int continuous = spec.n_features - 1;
  const int per_answer = spec.segments_per_answer();
  const auto rows = static_cast<Eigen::Index>(spec.n_participants) * spec.n_questions * per_answer;

  SyntheticDataset data;
  data.n_questions = spec.n_questions;
  data.features.resize(rows, spec.n_features);
  data.participant_ids.reserve(static_cast<std::size_t>(rows));
  data.question_indices.reserve(static_cast<std::size_t>(rows));
  data.labels.reserve(static_cast<std::size_t>(rows));

  std::normal_distribution<double> standard(0.0, 1.0);

  Eigen::VectorXd direction(continuous);
  {
    auto engine = make_engine(spec.seed, kDirectionStream);
    for (auto& v : direction) v = standard(engine);
  }

  // Roles are assigned by id (the first n_deceptive are Deceptive); gender and
  // ethnicity tags are shuffled independently so they carry no role signal.
  {
    auto engine = make_engine(spec.seed, kMetadataStream);
    const int n = spec.n_participants;
    const int asian_arabic = static_cast<int>(std::lround(kAsianArabicShare * n));
    const int male = static_cast<int>(std::lround(kMaleShare * n));
    std::vector<int> ethnicity_order(n), gender_order(n);
    std::iota(ethnicity_order.begin(), ethnicity_order.end(), 0);
    std::iota(gender_order.begin(), gender_order.end(), 0);
    std::shuffle(ethnicity_order.begin(), ethnicity_order.end(), engine);
    std::shuffle(gender_order.begin(), gender_order.end(), engine);
    data.participants.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto& p = data.participants[static_cast<std::size_t>(i)];
      p.id = i + 1;
      p.role = i < spec.n_deceptive ? Role::Deceptive : Role::Truthful;
    }
    for (int rank = 0; rank < n; ++rank) {
      data.participants[static_cast<std::size_t>(ethnicity_order[rank])].demographic =
          rank < asian_arabic ? "Asian/Arabic" : "White European";
      data.participants[static_cast<std::size_t>(gender_order[rank])].gender = rank < male ? 1 : 0;
    }
  }

  Eigen::Index row = 0;
  Eigen::VectorXd person_effect(continuous);
  for (const auto& p : data.participants) {
    auto engine = make_engine(spec.seed, kParticipantStreamBase + static_cast<std::uint64_t>(p.id));
    for (auto& v : person_effect) v = spec.person_effect_scale * standard(engine);
    const Label label = directed_label(p.role);
    const double sign = label == Label::Deception ? 1.0 : -1.0;
    const Eigen::VectorXd centre = person_effect + (0.5 * sign * spec.class_effect_scale) * direction;

    for (int q = 1; q <= spec.n_questions; ++q) {
      for (int s = 0; s < per_answer; ++s, ++row) {
        for (int j = 0; j < continuous; ++j) {
          data.features(row, j) = centre[j] + spec.noise_scale * standard(engine);
        }
        data.features(row, continuous) = p.gender;
        data.participant_ids.push_back(p.id);
        data.question_indices.push_back(q);
        data.labels.push_back(label);
      }
    }
  }
  return data;
}

SyntheticDataset select_rows(const SyntheticDataset& dataset, const std::vector<std::size_t>& rows) {
  SyntheticDataset out;
  out.participants = dataset.participants;
  out.n_questions = dataset.n_questions;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), dataset.features.cols());
  out.participant_ids.reserve(rows.size());
  out.question_indices.reserve(rows.size());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i];
    out.features.row(static_cast<Eigen::Index>(i)) = dataset.features.row(static_cast<Eigen::Index>(r));
    out.participant_ids.push_back(dataset.participant_ids[r]);
    out.question_indices.push_back(dataset.question_indices[r]);
    out.labels.push_back(dataset.labels[r]);
  }
  return out;
}

void write_dataset_csv(std::ostream& out, const SyntheticDataset& dataset) {
  out << "participant_id,question,label";
  for (int j = 1; j <= dataset.n_features(); ++j) out << ",f" << j;
  out << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << dataset.participant_ids[i] << ',' << dataset.question_indices[i] << ','
        << label_name(dataset.labels[i]);
    for (Eigen::Index j = 0; j < dataset.features.cols(); ++j) {
      out << ',' << csv::format_number(dataset.features(static_cast<Eigen::Index>(i), j));
    }
    out << '\n';
  }
}

SyntheticDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("dataset", "empty CSV");
  const auto header = csv::split(line);
  if (header.size() < 4 || header[0] != "participant_id" || header[1] != "question" ||
      header[2] != "label") {
    throw InvalidArgument("dataset", "header must start with participant_id,question,label");
  }
  const auto n_features = static_cast<Eigen::Index>(header.size() - 3);

  std::vector<double> values;
  SyntheticDataset data;
  std::map<int, bool> deceptive;
  int max_question = 0;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split(line);
    if (static_cast<Eigen::Index>(fields.size()) != n_features + 3) {
      throw InvalidArgument("dataset", "line " + std::to_string(line_number) + " has " +
                                           std::to_string(fields.size()) + " fields");
    }
    const int id = static_cast<int>(csv::parse_int(fields[0], "participant_id"));
    const int question = static_cast<int>(csv::parse_int(fields[1], "question"));
    Label label;
    if (fields[2] == "Deception") {
      label = Label::Deception;
    } else if (fields[2] == "Truth") {
      label = Label::Truth;
    } else {
      throw InvalidArgument("label", "expected Deception or Truth on line " + std::to_string(line_number));
    }
    for (Eigen::Index j = 0; j < n_features; ++j) {
      values.push_back(csv::parse_double(fields[static_cast<std::size_t>(j) + 3], "feature"));
    }
    data.participant_ids.push_back(id);
    data.question_indices.push_back(question);
    data.labels.push_back(label);
    deceptive[id] = deceptive[id] || label == Label::Deception;
    max_question = std::max(max_question, question);
  }

  const auto rows = static_cast<Eigen::Index>(data.labels.size());
  data.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), rows, n_features);
  data.n_questions = max_question;

  for (const auto& [id, is_deceptive] : deceptive) {
    Participant p;
    p.id = id;
    p.role = is_deceptive ? Role::Deceptive : Role::Truthful;
    p.demographic = "unknown";
    data.participants.push_back(p);
  }
  // Gender bit: last column of the participant's first row, when it is 0 or 1.
  for (auto& p : data.participants) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (data.participant_ids[static_cast<std::size_t>(i)] != p.id) continue;
      const double g = data.features(i, n_features - 1);
      if (g == 0.0 || g == 1.0) p.gender = static_cast<int>(g);
      break;
    }
  }
  data.validate();
  return data;
}

}  // namespace screening
