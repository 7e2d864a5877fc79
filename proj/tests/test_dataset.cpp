#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "screening/dataset.hpp"
#include "screening/errors.hpp"

using namespace screening;

namespace {

DatasetSpec small_spec() {
  DatasetSpec s;
  s.target_total_vectors = 32 * 13 * 4;
  return s;
}

}  // namespace

TEST_CASE("default spec sizes") {
  const DatasetSpec spec;
  CHECK(spec.segments_per_answer() == 208);
  const auto data = generate_synthetic_dataset(spec);
  CHECK(data.participants.size() == 32);
  CHECK(data.size() == 86'528);
  CHECK(std::llabs(static_cast<long long>(data.size()) - spec.target_total_vectors) <= 32 * 13);
  CHECK(data.n_features() == 38);
  CHECK_NOTHROW(data.validate());
}

TEST_CASE("spec validation names the field") {
  auto expect_field = [](DatasetSpec s, const std::string& field) {
    try {
      s.validate();
      FAIL("expected InvalidSpec for " << field);
    } catch (const InvalidSpec& e) {
      CHECK(e.field() == field);
    }
  };
  DatasetSpec s;
  s.n_deceptive = 33;
  expect_field(s, "n_deceptive");
  s = {};
  s.target_total_vectors = 100;
  expect_field(s, "target_total_vectors");
  s = {};
  s.person_effect_scale = -1;
  expect_field(s, "person_effect_scale");
  s = {};
  s.noise_scale = 0;
  expect_field(s, "noise_scale");
  s = {};
  s.n_features = 1;
  expect_field(s, "n_features");
}

TEST_CASE("roles, labels and metadata") {
  const auto data = generate_synthetic_dataset(small_spec());
  int deceptive = 0, male = 0, asian_arabic = 0;
  for (const auto& p : data.participants) {
    deceptive += p.role == Role::Deceptive;
    male += p.gender;
    asian_arabic += p.demographic == "Asian/Arabic";
  }
  CHECK(deceptive == 16);
  CHECK(male == 22);
  CHECK(asian_arabic == 10);

  std::map<std::pair<int, int>, int> per_answer;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& p = data.participant(data.participant_ids[i]);
    CHECK(data.labels[i] == directed_label(p.role));
    CHECK(data.features(static_cast<Eigen::Index>(i), 37) == p.gender);
    ++per_answer[{data.participant_ids[i], data.question_indices[i]}];
  }
  CHECK(per_answer.size() == 32 * 13);
  for (const auto& [key, count] : per_answer) CHECK(count == 4);
}

TEST_CASE("generation is deterministic and seed-sensitive") {
  const auto a = generate_synthetic_dataset(small_spec());
  const auto b = generate_synthetic_dataset(small_spec());
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  auto other = small_spec();
  other.seed += 1;
  CHECK_FALSE(generate_synthetic_dataset(other).features == a.features);
}

TEST_CASE("zero person effect and zero class effect collapse participants to noise") {
  auto s = small_spec();
  s.person_effect_scale = 0;
  s.class_effect_scale = 0;
  s.noise_scale = 1e-9;
  const auto data = generate_synthetic_dataset(s);
  CHECK(data.features.leftCols(37).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("class effect separates the class means along one direction") {
  auto s = small_spec();
  s.person_effect_scale = 0;
  s.class_effect_scale = 4;
  s.noise_scale = 0.1;
  const auto data = generate_synthetic_dataset(s);
  Eigen::RowVectorXd truth = Eigen::RowVectorXd::Zero(38), lie = Eigen::RowVectorXd::Zero(38);
  int nt = 0, nl = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] == Label::Deception) {
      lie += data.features.row(static_cast<Eigen::Index>(i));
      ++nl;
    } else {
      truth += data.features.row(static_cast<Eigen::Index>(i));
      ++nt;
    }
  }
  const Eigen::RowVectorXd gap = (lie / nl - truth / nt).leftCols(37);
  // |gap| = class_effect_scale * |direction| with |direction|^2 ~ chi2(37).
  CHECK(gap.norm() > 4 * 4.0);
  CHECK(gap.norm() < 4 * 8.0);
}

TEST_CASE("select_rows keeps the participant table") {
  const auto data = generate_synthetic_dataset(small_spec());
  const auto sub = select_rows(data, {5, 0, 100});
  CHECK(sub.size() == 3);
  CHECK(sub.participants.size() == data.participants.size());
  CHECK(sub.features.row(0) == data.features.row(5));
  CHECK(sub.participant_ids[2] == data.participant_ids[100]);
  CHECK_NOTHROW(sub.validate());
}

TEST_CASE("csv round trip is exact") {
  auto s = small_spec();
  s.n_participants = 6;
  s.n_deceptive = 2;
  s.target_total_vectors = 6 * 13 * 3;
  const auto data = generate_synthetic_dataset(s);
  std::stringstream buffer;
  write_dataset_csv(buffer, data);
  const auto back = read_dataset_csv(buffer);

  CHECK(back.features == data.features);
  CHECK(back.labels == data.labels);
  CHECK(back.participant_ids == data.participant_ids);
  CHECK(back.question_indices == data.question_indices);
  REQUIRE(back.participants.size() == data.participants.size());
  for (const auto& p : data.participants) {
    CHECK(back.participant(p.id).role == p.role);
    CHECK(back.participant(p.id).gender == p.gender);
  }

  std::stringstream again;
  write_dataset_csv(again, back);
  std::stringstream first;
  write_dataset_csv(first, data);
  CHECK(again.str() == first.str());
}

TEST_CASE("csv reader rejects malformed input") {
  std::istringstream bad_header("id,q,label,f1\n1,1,Truth,0.5\n");
  CHECK_THROWS_AS(read_dataset_csv(bad_header), InvalidArgument);
  std::istringstream bad_label("participant_id,question,label,f1,f2\n1,1,Maybe,0.5,1\n");
  CHECK_THROWS_AS(read_dataset_csv(bad_label), InvalidArgument);
  std::istringstream short_row("participant_id,question,label,f1,f2\n1,1,Truth,0.5\n");
  CHECK_THROWS_AS(read_dataset_csv(short_row), InvalidArgument);
}
