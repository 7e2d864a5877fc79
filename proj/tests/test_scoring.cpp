#include <doctest.h>

#include <random>
#include <vector>

#include "screening/errors.hpp"
#include "screening/scoring.hpp"

using namespace screening;

namespace {

QuestionScore decided(double v) { return {v, 1, 1}; }
QuestionScore undecided() { return {std::nullopt, 0, 2}; }

}  // namespace

TEST_CASE("question score from hand arithmetic") {
  const std::vector<double> d{0.9, 0.8, 0.95};
  const auto q = score_question(d, ScoringConfig{});
  REQUIRE(q.decided());
  CHECK(*q.value == doctest::Approx(0.8833).epsilon(1e-4));
  CHECK(q.retained == 3);
  CHECK(q.total == 3);
}

TEST_CASE("band interior is dropped, band edges are kept") {
  const std::vector<double> d{0.4, 0.5, 0.6, 0.41};
  const auto q = score_question(d, ScoringConfig{});
  CHECK(q.retained == 2);
  CHECK(*q.value == doctest::Approx(0.5));
}

TEST_CASE("all segments ambiguous gives Undecided") {
  const std::vector<double> d{0.45, 0.55};
  const auto q = score_question(d, ScoringConfig{});
  CHECK_FALSE(q.decided());
  CHECK(q.retained == 0);
  CHECK(q.total == 2);
}

TEST_CASE("empty answers are rejected") {
  CHECK_THROWS_AS(score_question(std::vector<double>{}, ScoringConfig{}), EmptyAnswer);
}

TEST_CASE("degenerate band is exactly the plain mean (property)") {
  ScoringConfig flat{0.5, 0.5, 0.5};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> d(1 + rng() % 30);
    double sum = 0.0;
    for (auto& v : d) {
      v = u(rng);
      sum += v;
    }
    const auto q = score_question(d, flat);
    REQUIRE(q.decided());
    CHECK(*q.value == sum / static_cast<double>(d.size()));
    CHECK(q.retained == d.size());
  }
}

TEST_CASE("question scores stay in [0,1] (property)") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = u(rng), b = u(rng);
    const ScoringConfig band{std::min(a, b), std::max(a, b), 0.5};
    std::vector<double> d(1 + rng() % 10);
    for (auto& v : d) v = u(rng);
    const auto q = score_question(d, band);
    CHECK(q.retained <= q.total);
    if (q.decided()) {
      CHECK(*q.value >= 0.0);
      CHECK(*q.value <= 1.0);
    }
  }
}

TEST_CASE("decision rule and ties") {
  const ScoringConfig c;
  CHECK(decide(0.5, c) == Label::Deception);
  CHECK(decide(0.4999999, c) == Label::Truth);
  CHECK(decide(1.0, c) == Label::Deception);
}

TEST_CASE("participant verdicts") {
  const ScoringConfig c;
  SUBCASE("all high") {
    const std::vector<QuestionScore> qs(13, decided(0.9));
    const auto v = classify_participant(qs, c);
    CHECK(v.label == Label::Deception);
    CHECK(v.decided_questions == 13);
    CHECK_FALSE(v.tie);
  }
  SUBCASE("all low") {
    const std::vector<QuestionScore> qs(13, decided(0.1));
    CHECK(classify_participant(qs, c).label == Label::Truth);
  }
  SUBCASE("tie goes to Deception and is surfaced") {
    const std::vector<QuestionScore> qs{decided(0.6), decided(0.4), undecided()};
    const auto v = classify_participant(qs, c);
    CHECK(v.mean_score == doctest::Approx(0.5));
    CHECK(v.label == Label::Deception);
    CHECK(v.tie);
    CHECK(v.decided_questions == 2);
  }
  SUBCASE("nothing decided") {
    const std::vector<QuestionScore> qs{undecided(), undecided()};
    CHECK_THROWS_AS(classify_participant(qs, c), AllUndecided);
  }
}

TEST_CASE("scoring config validation") {
  CHECK_THROWS_AS((ScoringConfig{0.7, 0.6, 0.5}).validate(), InvalidArgument);
  CHECK_THROWS_AS((ScoringConfig{-0.1, 0.6, 0.5}).validate(), InvalidArgument);
  CHECK_NOTHROW((ScoringConfig{0.5, 0.5, 0.5}).validate());
}
