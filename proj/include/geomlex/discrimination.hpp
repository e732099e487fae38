#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "geomlex/corpus.hpp"
#include "geomlex/error.hpp"
#include "geomlex/geometry.hpp"
#include "geomlex/rng.hpp"

namespace geomlex {

inline double cosine_distance(const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v) {
  return 1.0 - cosine_similarity(u, v);
}

// Category discriminability: mean over ordered within-category pairs of
// d(anchor, cross-draw) - d(anchor, within-partner). The cross embedding is
// drawn uniformly from all rows outside the category; draws are seeded per
// category so evaluation order cannot change results. Bounded in [-2, 2].
inline double cdi_category(const EmbeddingSet& set, const CategoryIndex& index,
                           const std::string& label, std::uint64_t seed) {
  auto it = index.groups.find(label);
  if (it == index.groups.end())
    throw Error("not-found", "unknown category: " + label);
  const auto& rows = it->second;
  if (rows.size() < 2)
    throw Error("insufficient-exemplars",
                "category '" + label + "' has fewer than 2 exemplars");

  std::vector<Eigen::Index> outside;
  outside.reserve(static_cast<std::size_t>(set.size()) - rows.size());
  for (Eigen::Index r = 0; r < set.size(); ++r)
    if (set.labels[static_cast<std::size_t>(r)] != label) outside.push_back(r);
  if (outside.empty())
    throw Error("no-contrast", "no rows outside category '" + label + "'");

  SplitMix64 rng(derive_seed(seed, label));
  double sum = 0.0;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < rows.size(); ++b) {
      if (a == b) continue;
      Eigen::Index cross = outside[rng.next_below(outside.size())];
      sum += cosine_distance(set.matrix.row(rows[a]), set.matrix.row(cross)) -
             cosine_distance(set.matrix.row(rows[a]), set.matrix.row(rows[b]));
    }
  }
  auto ordered_pairs = static_cast<double>(rows.size() * (rows.size() - 1));
  return sum / ordered_pairs;
}

struct CdiResult {
  std::map<std::string, double> per_category;
  std::map<std::string, std::size_t> pairs_evaluated;
  std::vector<std::string> skipped;  // singleton categories
  double mean = 0.0;
  double std_dev = 0.0;  // population
  std::uint64_t seed = 0;
};

inline CdiResult cdi_all(const EmbeddingSet& set, const CategoryIndex& index,
                         std::uint64_t seed) {
  if (index.groups.size() < 2)
    throw Error("no-contrast", "need at least two categories");
  CdiResult result;
  result.seed = seed;
  for (const auto& [label, rows] : index.groups) {
    if (rows.size() < 2) {
      result.skipped.push_back(label);
      continue;
    }
    result.per_category[label] = cdi_category(set, index, label, seed);
    result.pairs_evaluated[label] = rows.size() * (rows.size() - 1);
  }
  if (result.per_category.empty())
    throw Error("no-eligible-categories",
                "every category has fewer than 2 exemplars");

  double sum = 0.0;
  for (const auto& [label, v] : result.per_category) sum += v;
  auto n = static_cast<double>(result.per_category.size());
  result.mean = sum / n;
  double ss = 0.0;
  for (const auto& [label, v] : result.per_category)
    ss += (v - result.mean) * (v - result.mean);
  result.std_dev = std::sqrt(ss / n);
  return result;
}

// Same-different word discrimination via query-based mean average precision.
// Every row with at least one same-type partner is a query; all other rows
// are ranked by descending cosine similarity, ties broken by ascending row
// index. Rows without partners stay in the ranking as distractors.
inline double map_same_different(const EmbeddingSet& set,
                                 const CategoryIndex& index,
                                 unsigned threads = 1) {
  const Eigen::Index n = set.size();
  std::vector<Eigen::Index> queries;
  for (const auto& [label, rows] : index.groups)
    if (rows.size() >= 2)
      for (auto r : rows) queries.push_back(r);
  if (queries.empty())
    throw Error("no-valid-queries", "no row has a same-type partner");
  std::sort(queries.begin(), queries.end());

  std::vector<double> ap(queries.size());
  auto work = [&](std::size_t qi) {
    Eigen::Index q = queries[qi];
    const auto& qlabel = set.labels[static_cast<std::size_t>(q)];
    std::vector<std::pair<double, Eigen::Index>> ranked;
    ranked.reserve(static_cast<std::size_t>(n) - 1);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == q) continue;
      ranked.emplace_back(
          cosine_similarity(set.matrix.row(q), set.matrix.row(r)), r);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    double precision_sum = 0.0;
    std::size_t relevant = 0;
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      if (set.labels[static_cast<std::size_t>(ranked[k].second)] == qlabel) {
        ++relevant;
        precision_sum +=
            static_cast<double>(relevant) / static_cast<double>(k + 1);
      }
    }
    ap[qi] = precision_sum / static_cast<double>(relevant);
  };

  if (threads <= 1) {
    for (std::size_t qi = 0; qi < queries.size(); ++qi) work(qi);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (queries.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t begin = t * chunk;
      std::size_t end = std::min(queries.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        for (std::size_t qi = begin; qi < end; ++qi) work(qi);
      });
    }
    for (auto& th : pool) th.join();
  }

  return std::accumulate(ap.begin(), ap.end(), 0.0) /
         static_cast<double>(ap.size());
}

struct CentroidTable {
  std::map<std::string, Eigen::VectorXd> centroids;
  std::map<std::string, std::size_t> counts;
};

inline CentroidTable centroids(const EmbeddingSet& set,
                               const CategoryIndex& index) {
  CentroidTable table;
  for (const auto& [label, rows] : index.groups) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(set.dim());
    for (auto r : rows) mean += set.matrix.row(r).transpose();
    table.centroids[label] = mean / static_cast<double>(rows.size());
    table.counts[label] = rows.size();
  }
  return table;
}

// Top-k centroids by cosine similarity to the query's centroid. Ties break
// lexicographically on the label.
inline std::vector<std::pair<std::string, double>> nearest_centroids(
    const CentroidTable& table, const std::string& query, std::size_t k) {
  auto it = table.centroids.find(query);
  if (it == table.centroids.end()) {
    std::string near;
    auto lb = table.centroids.lower_bound(query);
    if (lb != table.centroids.end()) near = lb->first;
    if (lb != table.centroids.begin()) {
      if (!near.empty()) near += "', '";
      near += std::prev(lb)->first;
    }
    throw Error("not-found", "unknown centroid label '" + query +
                                 "'; nearest lexicographic matches: '" + near +
                                 "'");
  }
  std::vector<std::pair<std::string, double>> ranked;
  for (const auto& [label, centroid] : table.centroids) {
    if (label == query) continue;
    ranked.emplace_back(label, cosine_similarity(it->second, centroid));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

}  // namespace geomlex
