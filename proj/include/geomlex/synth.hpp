#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "geomlex/corpus.hpp"
#include "geomlex/error.hpp"
#include "geomlex/rng.hpp"

namespace geomlex {

// Controllable synthetic test-bed: clustered Gaussian embeddings with
// adjustable category separation, within-category spread, and dimension
// utilization. Output is a pure function of the spec.
struct SynthSpec {
  std::size_t num_categories = 10;
  std::size_t exemplars_per_category = 8;
  Eigen::Index dim = 16;
  double separation = 1.0;
  double within_spread = 0.1;
  Eigen::Index utilized_dims = 16;  // noise confined to leading coordinates
  bool orthogonal_centroids = false;
  std::uint64_t seed = 0;

  void validate() const {
    if (num_categories < 1 || exemplars_per_category < 1)
      throw Error("validation", "counts must be >= 1");
    if (dim < 1) throw Error("validation", "dim must be >= 1");
    if (utilized_dims < 1 || utilized_dims > dim)
      throw Error("validation", "utilized_dims must be in [1, dim]");
    if (separation < 0.0 || within_spread < 0.0 ||
        !std::isfinite(separation) || !std::isfinite(within_spread))
      throw Error("validation", "scales must be finite and >= 0");
    if (orthogonal_centroids &&
        num_categories > static_cast<std::size_t>(dim))
      throw Error("capacity",
                  "orthogonalized placement needs num_categories <= dim");
  }
};

inline constexpr const char* kSynthPhonemes[20] = {
    "P", "B", "T", "D", "K", "G", "M",  "N",  "NG", "F",
    "V", "S", "Z", "SH", "CH", "L", "R", "W",  "Y",  "HH"};

inline std::string synth_label(std::size_t category) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "w%04zu", category + 1);
  return buf;
}

inline std::pair<EmbeddingSet, Lexicon> generate(const SynthSpec& spec) {
  spec.validate();

  SplitMix64 centroid_rng(derive_seed(spec.seed, "centroids"));
  SplitMix64 noise_rng(derive_seed(spec.seed, "noise"));
  SplitMix64 lexicon_rng(derive_seed(spec.seed, "lexicon"));

  std::vector<Eigen::VectorXd> category_centroids;
  category_centroids.reserve(spec.num_categories);
  for (std::size_t c = 0; c < spec.num_categories; ++c) {
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(spec.dim);
    if (spec.orthogonal_centroids) {
      centroid(static_cast<Eigen::Index>(c)) = spec.separation;
    } else {
      for (Eigen::Index d = 0; d < spec.dim; ++d)
        centroid(d) = spec.separation * centroid_rng.next_gaussian();
    }
    category_centroids.push_back(std::move(centroid));
  }

  EmbeddingSet set;
  auto n = spec.num_categories * spec.exemplars_per_category;
  set.matrix.resize(static_cast<Eigen::Index>(n), spec.dim);
  set.labels.reserve(n);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < spec.num_categories; ++c) {
    std::string label = synth_label(c);
    for (std::size_t e = 0; e < spec.exemplars_per_category; ++e) {
      Eigen::VectorXd point = category_centroids[c];
      for (Eigen::Index d = 0; d < spec.utilized_dims; ++d)
        point(d) += spec.within_spread * noise_rng.next_gaussian();
      set.matrix.row(row++) = point;
      set.labels.push_back(label);
    }
  }

  Lexicon lexicon;
  for (std::size_t c = 0; c < spec.num_categories; ++c) {
    // pronunciation lengths uniform in [3, 9]
    std::size_t length = 3 + lexicon_rng.next_below(7);
    PhonemeSequence seq;
    for (std::size_t i = 0; i < length; ++i)
      seq.symbols.emplace_back(kSynthPhonemes[lexicon_rng.next_below(20)]);
    lexicon.entries[synth_label(c)] = std::move(seq);
  }

  return {std::move(set), std::move(lexicon)};
}

}  // namespace geomlex
