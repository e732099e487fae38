#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "geomlex/corpus.hpp"
#include "geomlex/discrimination.hpp"
#include "geomlex/error.hpp"

namespace geomlex {

// One frame per row; all frames share the feature dimension.
struct FeatureSequence {
  Eigen::MatrixXd frames;  // S x F
};

// One probability distribution over the label inventory per decoder step.
struct ProbSequence {
  Eigen::MatrixXd steps;  // tau x V

  void validate() const {
    for (Eigen::Index t = 0; t < steps.rows(); ++t) {
      if (steps.row(t).minCoeff() < 0.0)
        throw Error("validation",
                    "negative probability at step " + std::to_string(t));
      if (std::fabs(steps.row(t).sum() - 1.0) > 1e-6)
        throw Error("validation", "step " + std::to_string(t) +
                                      " does not sum to 1");
    }
  }
};

struct TripletConfig {
  double margin = 0.4;
};

// Sum over timesteps of the Euclidean distance between predicted and target
// frames (per-timestep L2, summed, not squared).
inline double reconstruction_loss(const FeatureSequence& predicted,
                                  const FeatureSequence& target) {
  if (predicted.frames.rows() != target.frames.rows())
    throw Error("validation", "sequence length mismatch");
  if (predicted.frames.cols() != target.frames.cols())
    throw Error("validation", "frame dimension mismatch");
  double loss = 0.0;
  for (Eigen::Index i = 0; i < target.frames.rows(); ++i)
    loss += (target.frames.row(i) - predicted.frames.row(i)).norm();
  return loss;
}

// Categorical cross-entropy of the target phoneme at each decoder step,
// natural log.
inline double phonological_decoding_loss(
    const ProbSequence& probs, const PhonemeSequence& target,
    const std::map<std::string, Eigen::Index>& inventory) {
  probs.validate();
  if (probs.steps.rows() != static_cast<Eigen::Index>(target.symbols.size()))
    throw Error("validation", "probability sequence length does not match "
                              "target phoneme count");
  double loss = 0.0;
  for (Eigen::Index t = 0; t < probs.steps.rows(); ++t) {
    const auto& phoneme = target.symbols[static_cast<std::size_t>(t)];
    auto it = inventory.find(phoneme);
    if (it == inventory.end() || it->second < 0 ||
        it->second >= probs.steps.cols())
      throw Error("out-of-vocabulary",
                  "phoneme '" + phoneme + "' not in inventory");
    loss -= std::log(probs.steps(t, it->second));
  }
  return loss;
}

struct TripletLossResult {
  double loss = 0.0;  // mean over pairs
  std::vector<Eigen::Index> chosen_negatives;
};

// Triplet margin loss with in-batch hardest-negative mining: per anchor, the
// negative is the different-label row minimizing cosine distance to the
// anchor (ties -> lowest row index).
inline TripletLossResult triplet_loss_batch(
    const EmbeddingSet& batch,
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs,
    const TripletConfig& config) {
  if (config.margin < 0.0) throw Error("validation", "margin must be >= 0");
  if (pairs.empty()) throw Error("validation", "no anchor-positive pairs");

  TripletLossResult result;
  double sum = 0.0;
  for (auto [anchor, positive] : pairs) {
    if (anchor < 0 || anchor >= batch.size() || positive < 0 ||
        positive >= batch.size())
      throw Error("validation", "pair index out of range");
    const auto& label = batch.labels[static_cast<std::size_t>(anchor)];
    if (batch.labels[static_cast<std::size_t>(positive)] != label)
      throw Error("validation",
                  "anchor and positive have different labels: '" + label +
                      "' vs '" +
                      batch.labels[static_cast<std::size_t>(positive)] + "'");

    Eigen::Index best = -1;
    double best_distance = 0.0;
    for (Eigen::Index r = 0; r < batch.size(); ++r) {
      if (batch.labels[static_cast<std::size_t>(r)] == label) continue;
      double dist =
          cosine_distance(batch.matrix.row(anchor), batch.matrix.row(r));
      if (best < 0 || dist < best_distance) {
        best = r;
        best_distance = dist;
      }
    }
    if (best < 0)
      throw Error("no-negative",
                  "no row with a label different from '" + label + "'");

    double positive_distance =
        cosine_distance(batch.matrix.row(anchor), batch.matrix.row(positive));
    sum += std::max(0.0, config.margin + positive_distance - best_distance);
    result.chosen_negatives.push_back(best);
  }
  result.loss = sum / static_cast<double>(pairs.size());
  return result;
}

}  // namespace geomlex
