#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "geomlex/corpus.hpp"
#include "geomlex/objectives.hpp"
#include "geomlex/rng.hpp"
#include "geomlex/synth.hpp"

using namespace geomlex;

TEST_CASE("reconstruction loss fixtures") {
  FeatureSequence target{Eigen::MatrixXd(1, 2)};
  target.frames << 3, 4;
  FeatureSequence zero{Eigen::MatrixXd::Zero(1, 2)};
  CHECK(reconstruction_loss(target, target) == doctest::Approx(0.0));
  CHECK(reconstruction_loss(zero, target) == doctest::Approx(5.0));

  FeatureSequence two_target{Eigen::MatrixXd(2, 2)};
  two_target.frames << 3, 4, 1, 0;
  FeatureSequence two_zero{Eigen::MatrixXd::Zero(2, 2)};
  CHECK(reconstruction_loss(two_zero, two_target) == doctest::Approx(6.0));
}

TEST_CASE("reconstruction loss validates shapes") {
  FeatureSequence a{Eigen::MatrixXd::Zero(2, 3)};
  FeatureSequence b{Eigen::MatrixXd::Zero(3, 3)};
  FeatureSequence c{Eigen::MatrixXd::Zero(2, 4)};
  CHECK_THROWS_AS(reconstruction_loss(a, b), Error);
  CHECK_THROWS_AS(reconstruction_loss(a, c), Error);
}

TEST_CASE("decoding loss: one-hot fixtures") {
  std::map<std::string, Eigen::Index> inventory{{"A", 0}, {"B", 1}, {"C", 2}};
  ProbSequence probs{Eigen::MatrixXd(2, 3)};
  probs.steps << 1, 0, 0, 0, 1, 0;
  PhonemeSequence target{{"A", "B"}};
  CHECK(phonological_decoding_loss(probs, target, inventory) ==
        doctest::Approx(0.0));
}

TEST_CASE("decoding loss: uniform probabilities give tau ln V") {
  std::map<std::string, Eigen::Index> inventory{
      {"A", 0}, {"B", 1}, {"C", 2}, {"D", 3}};
  ProbSequence probs{Eigen::MatrixXd::Constant(3, 4, 0.25)};
  PhonemeSequence target{{"D", "A", "C"}};
  CHECK(phonological_decoding_loss(probs, target, inventory) ==
        doctest::Approx(3.0 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("decoding loss: single-step arithmetic") {
  std::map<std::string, Eigen::Index> inventory{{"A", 0}, {"B", 1}, {"C", 2}};
  ProbSequence probs{Eigen::MatrixXd(1, 3)};
  probs.steps << 0.5, 0.25, 0.25;
  PhonemeSequence target{{"A"}};
  CHECK(phonological_decoding_loss(probs, target, inventory) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("decoding loss is additive over timesteps") {
  std::map<std::string, Eigen::Index> inventory{{"A", 0}, {"B", 1}};
  ProbSequence step1{Eigen::MatrixXd(1, 2)};
  step1.steps << 0.7, 0.3;
  ProbSequence step2{Eigen::MatrixXd(1, 2)};
  step2.steps << 0.2, 0.8;
  ProbSequence both{Eigen::MatrixXd(2, 2)};
  both.steps << 0.7, 0.3, 0.2, 0.8;
  double separate =
      phonological_decoding_loss(step1, PhonemeSequence{{"A"}}, inventory) +
      phonological_decoding_loss(step2, PhonemeSequence{{"B"}}, inventory);
  CHECK(phonological_decoding_loss(both, PhonemeSequence{{"A", "B"}},
                                   inventory) ==
        doctest::Approx(separate).epsilon(1e-12));
}

TEST_CASE("decoding loss error contracts") {
  std::map<std::string, Eigen::Index> inventory{{"A", 0}, {"B", 1}};
  ProbSequence bad_sum{Eigen::MatrixXd(1, 2)};
  bad_sum.steps << 0.5, 0.6;
  try {
    phonological_decoding_loss(bad_sum, PhonemeSequence{{"A"}}, inventory);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "validation");
  }
  ProbSequence ok{Eigen::MatrixXd(1, 2)};
  ok.steps << 0.5, 0.5;
  try {
    phonological_decoding_loss(ok, PhonemeSequence{{"Z"}}, inventory);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "out-of-vocabulary");
  }
}

TEST_CASE("triplet loss per-pair arithmetic") {
  // d(a,+) = 0, d(a,-) = 1, margin 0.4 -> hinge at 0
  auto batch = parse_embedding_set("a\t1\t0\na\t2\t0\nb\t0\t1\n");
  auto result = triplet_loss_batch(batch, {{0, 1}}, TripletConfig{0.4});
  CHECK(result.loss == doctest::Approx(0.0));
  CHECK(result.chosen_negatives == std::vector<Eigen::Index>{2});
}

TEST_CASE("triplet loss violated margin arithmetic") {
  // cos(a,+) = cos(60deg) = 0.5 -> d = 0.5; negative at d = 0.2
  double angle_pos = std::numbers::pi / 3.0;
  double angle_neg = std::acos(0.8);
  EmbeddingSet batch;
  batch.labels = {"a", "a", "b"};
  batch.matrix.resize(3, 2);
  batch.matrix << 1, 0, std::cos(angle_pos), std::sin(angle_pos),
      std::cos(angle_neg), std::sin(angle_neg);
  auto result = triplet_loss_batch(batch, {{0, 1}}, TripletConfig{0.4});
  // 0.4 + 0.5 - 0.2 = 0.7
  CHECK(result.loss == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("triplet loss error contracts") {
  auto batch = parse_embedding_set("a\t1\t0\na\t0\t1\n");
  try {
    triplet_loss_batch(batch, {{0, 1}}, TripletConfig{0.4});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "no-negative");
  }
  auto mixed = parse_embedding_set("a\t1\t0\nb\t0\t1\n");
  try {
    triplet_loss_batch(mixed, {{0, 1}}, TripletConfig{0.4});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "validation");
  }
}

TEST_CASE("hardest negatives match an exhaustive argmin oracle") {
  SynthSpec spec;
  spec.num_categories = 4;
  spec.exemplars_per_category = 4;
  spec.dim = 6;
  spec.utilized_dims = 6;
  spec.separation = 0.8;
  spec.within_spread = 0.6;
  spec.seed = 55;
  auto [batch, lexicon] = generate(spec);
  auto index = CategoryIndex::build(batch);

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (const auto& [label, rows] : index.groups)
    pairs.emplace_back(rows[0], rows[1]);

  auto result = triplet_loss_batch(batch, pairs, TripletConfig{0.4});

  double oracle_sum = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [anchor, positive] = pairs[p];
    Eigen::Index best = -1;
    double best_distance = 1e300;
    for (Eigen::Index r = 0; r < batch.size(); ++r) {
      if (batch.labels[static_cast<std::size_t>(r)] ==
          batch.labels[static_cast<std::size_t>(anchor)])
        continue;
      double dist = 1.0 - batch.matrix.row(anchor).dot(batch.matrix.row(r)) /
                              (batch.matrix.row(anchor).norm() *
                               batch.matrix.row(r).norm());
      if (dist < best_distance) {
        best = r;
        best_distance = dist;
      }
    }
    CHECK(result.chosen_negatives[p] == best);
    double pos_dist =
        1.0 - batch.matrix.row(anchor).dot(batch.matrix.row(positive)) /
                  (batch.matrix.row(anchor).norm() *
                   batch.matrix.row(positive).norm());
    oracle_sum += std::max(0.0, 0.4 + pos_dist - best_distance);
  }
  CHECK(result.loss ==
        doctest::Approx(oracle_sum / pairs.size()).epsilon(1e-12));
}

TEST_CASE("hardest-negative choice is scale invariant") {
  SynthSpec spec;
  spec.num_categories = 3;
  spec.exemplars_per_category = 3;
  spec.dim = 4;
  spec.utilized_dims = 4;
  spec.within_spread = 0.5;
  spec.seed = 6;
  auto [batch, lexicon] = generate(spec);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs{{0, 1}, {3, 4}};
  auto base = triplet_loss_batch(batch, pairs, TripletConfig{0.4});
  EmbeddingSet scaled = batch;
  scaled.matrix *= 7.3;
  auto after = triplet_loss_batch(scaled, pairs, TripletConfig{0.4});
  CHECK(base.chosen_negatives == after.chosen_negatives);
  CHECK(base.loss == doctest::Approx(after.loss).epsilon(1e-12));
}

TEST_CASE("triplet per-pair term bounded by margin + 2") {
  auto batch = parse_embedding_set("a\t1\t0\na\t-1\t0\nb\t1\t0.0001\n");
  auto result = triplet_loss_batch(batch, {{0, 1}}, TripletConfig{0.4});
  CHECK(result.loss <= 0.4 + 2.0);
  CHECK(result.loss >= 0.0);
}
