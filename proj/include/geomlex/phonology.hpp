#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geomlex/corpus.hpp"
#include "geomlex/error.hpp"

namespace geomlex {

// Left-padding symbol for word-initial contexts. Reserved: may not appear
// as a phoneme in training data.
inline constexpr const char* kBoundarySymbol = "#";

// Add-k smoothed trigram phoneme language model.
class TrigramPLM {
public:
  using Context = std::pair<std::string, std::string>;

  static TrigramPLM fit(const std::vector<PhonemeSequence>& pronunciations,
                        double k,
                        const std::set<std::string>& extra_inventory = {}) {
    if (k < 0.0) throw Error("validation", "smoothing k must be >= 0");
    TrigramPLM model;
    model.k_ = k;
    model.inventory_ = extra_inventory;
    for (const auto& word : pronunciations) {
      if (word.symbols.empty())
        throw Error("validation", "empty pronunciation in training data");
      std::string p2 = kBoundarySymbol;
      std::string p1 = kBoundarySymbol;
      for (const auto& phoneme : word.symbols) {
        if (phoneme == kBoundarySymbol)
          throw Error("validation", "boundary symbol used as a phoneme");
        model.inventory_.insert(phoneme);
        Context ctx{p2, p1};
        ++model.counts_[ctx][phoneme];
        ++model.totals_[ctx];
        p2 = p1;
        p1 = phoneme;
      }
    }
    if (model.inventory_.empty())
      throw Error("unusable-model",
                  "no training data and no explicit inventory");
    if (pronunciations.empty() && k == 0.0)
      throw Error("unusable-model", "empty training data with k = 0");
    return model;
  }

  double k() const { return k_; }
  const std::set<std::string>& inventory() const { return inventory_; }

  // p(phoneme | p2, p1) = (count + k) / (total + k * V)
  double probability(const std::string& p2, const std::string& p1,
                     const std::string& phoneme) const {
    if (!inventory_.count(phoneme) && k_ == 0.0)
      throw Error("out-of-vocabulary",
                  "phoneme '" + phoneme + "' not in inventory");
    double count = 0.0;
    double total = 0.0;
    auto it = counts_.find({p2, p1});
    if (it != counts_.end()) {
      auto cit = it->second.find(phoneme);
      if (cit != it->second.end()) count = static_cast<double>(cit->second);
      total = static_cast<double>(totals_.at({p2, p1}));
    }
    if (k_ == 0.0) {
      if (count == 0.0)
        throw Error("out-of-vocabulary",
                    "unseen transition (" + p2 + ", " + p1 + ") -> " + phoneme +
                        " with k = 0");
      return count / total;
    }
    double v = static_cast<double>(inventory_.size());
    return (count + k_) / (total + k_ * v);
  }

  const std::map<Context, std::map<std::string, std::size_t>>& counts() const {
    return counts_;
  }
  const std::map<Context, std::size_t>& totals() const { return totals_; }

private:
  std::set<std::string> inventory_;
  std::map<Context, std::map<std::string, std::size_t>> counts_;
  std::map<Context, std::size_t> totals_;
  double k_ = 1.0;
};

inline TrigramPLM fit_trigram(const std::vector<PhonemeSequence>& words,
                              double k,
                              const std::set<std::string>& inventory = {}) {
  return TrigramPLM::fit(words, k, inventory);
}

inline TrigramPLM fit_trigram(const Lexicon& lexicon, double k,
                              const std::set<std::string>& inventory = {}) {
  std::vector<PhonemeSequence> words;
  words.reserve(lexicon.entries.size());
  for (const auto& [w, seq] : lexicon.entries) words.push_back(seq);
  return TrigramPLM::fit(words, k, inventory);
}

// Phonological information content: summed natural-log trigram surprisal
// over the word's phonemes, with two-boundary left padding and no
// end-of-word term. Not length normalized.
inline double pic(const TrigramPLM& model, const PhonemeSequence& word) {
  if (word.symbols.empty())
    throw Error("validation", "cannot score an empty phoneme sequence");
  double total = 0.0;
  std::string p2 = kBoundarySymbol;
  std::string p1 = kBoundarySymbol;
  for (const auto& phoneme : word.symbols) {
    total -= std::log(model.probability(p2, p1, phoneme));
    p2 = p1;
    p1 = phoneme;
  }
  return total;
}

inline std::size_t word_length(const PhonemeSequence& word) {
  return word.symbols.size();
}

}  // namespace geomlex
