#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "geomlex/corpus.hpp"
#include "geomlex/error.hpp"
#include "geomlex/rng.hpp"

namespace geomlex {

inline double cosine_similarity(const Eigen::VectorXd& u,
                                const Eigen::VectorXd& v) {
  double nu = u.norm();
  double nv = v.norm();
  if (nu == 0.0 || nv == 0.0)
    throw Error("degenerate-vector", "cosine of a zero vector is undefined");
  return u.dot(v) / (nu * nv);
}

// Isotropy score of an embedding set, in [0, 1]. 1 means variance is
// uniform across all principal directions, 0 means a single direction
// carries all of it.
inline double isoscore(const EmbeddingSet& set) {
  const Eigen::Index n = set.size();
  const Eigen::Index d = set.dim();
  if (n < 2) throw Error("insufficient-data", "isoscore needs at least 2 rows");
  if (d < 2) throw Error("insufficient-data", "isoscore needs at least 2 dims");

  Eigen::MatrixXd centered =
      set.matrix.rowwise() - set.matrix.colwise().mean();
  Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);
  if (cov.trace() <= 0.0)
    throw Error("degenerate-input", "all rows identical: zero total variance");

  // Reorient onto principal components; the per-dimension variances of the
  // reoriented points are the covariance eigenvalues.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::VectorXd variances = eig.eigenvalues().cwiseMax(0.0);

  double dd = static_cast<double>(d);
  Eigen::VectorXd normalized =
      std::sqrt(dd) * variances / variances.norm();
  double defect = (normalized.array() - 1.0).matrix().norm() /
                  std::sqrt(2.0 * (dd - std::sqrt(dd)));
  double phi =
      std::pow(dd - defect * defect * (dd - std::sqrt(dd)), 2.0) / (dd * dd);
  double score = (dd * phi - 1.0) / (dd - 1.0);
  if (score < -1e-9 || score > 1.0 + 1e-9)
    throw Error("degenerate-input", "isotropy score out of range");
  return std::clamp(score, 0.0, 1.0);
}

struct SimilarityStats {
  std::vector<double> within_scores;
  std::vector<double> cross_scores;
  double within_mean = 0.0;
  double cross_mean = 0.0;
  double mean_difference = 0.0;
  std::vector<std::int64_t> within_histogram;  // bins over [-1, 1]
  std::vector<std::int64_t> cross_histogram;
};

namespace detail {

inline std::vector<std::int64_t> histogram(const std::vector<double>& scores,
                                           std::size_t bins) {
  std::vector<std::int64_t> counts(bins, 0);
  for (double s : scores) {
    auto b = static_cast<std::ptrdiff_t>((s + 1.0) / 2.0 *
                                         static_cast<double>(bins));
    b = std::clamp<std::ptrdiff_t>(b, 0,
                                   static_cast<std::ptrdiff_t>(bins) - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  return counts;
}

// Seeded uniform subsample of `count` pairs without replacement, via a
// partial Fisher-Yates shuffle over the enumerated pair list.
inline void truncate_pairs(
    std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs,
    std::size_t count, SplitMix64& rng) {
  if (pairs.size() <= count) return;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(
                            rng.next_below(pairs.size() - i));
    std::swap(pairs[i], pairs[j]);
  }
  pairs.resize(count);
}

}  // namespace detail

// Within- vs cross-category cosine similarity distributions on raw
// embeddings. Sampling is fully determined by the seed.
inline SimilarityStats similarity_distributions(const EmbeddingSet& set,
                                                const CategoryIndex& index,
                                                std::size_t max_pairs_per_group,
                                                std::uint64_t seed,
                                                std::size_t bins = 100) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> within;
  for (const auto& [label, rows] : index.groups)
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = a + 1; b < rows.size(); ++b)
        within.emplace_back(rows[a], rows[b]);
  if (within.empty())
    throw Error("within-empty", "no category has two or more exemplars");
  if (index.groups.size() < 2)
    throw Error("cross-empty", "need at least two categories");

  std::vector<std::pair<Eigen::Index, Eigen::Index>> cross;
  for (Eigen::Index i = 0; i < set.size(); ++i)
    for (Eigen::Index j = i + 1; j < set.size(); ++j)
      if (set.labels[static_cast<std::size_t>(i)] !=
          set.labels[static_cast<std::size_t>(j)])
        cross.emplace_back(i, j);

  SplitMix64 within_rng(derive_seed(seed, "within"));
  SplitMix64 cross_rng(derive_seed(seed, "cross"));
  detail::truncate_pairs(within, max_pairs_per_group, within_rng);
  detail::truncate_pairs(cross, max_pairs_per_group, cross_rng);

  SimilarityStats stats;
  for (auto [i, j] : within)
    stats.within_scores.push_back(
        cosine_similarity(set.matrix.row(i), set.matrix.row(j)));
  for (auto [i, j] : cross)
    stats.cross_scores.push_back(
        cosine_similarity(set.matrix.row(i), set.matrix.row(j)));

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  stats.within_mean = mean(stats.within_scores);
  stats.cross_mean = mean(stats.cross_scores);
  stats.mean_difference = stats.within_mean - stats.cross_mean;
  stats.within_histogram = detail::histogram(stats.within_scores, bins);
  stats.cross_histogram = detail::histogram(stats.cross_scores, bins);
  return stats;
}

struct GramMatrix {
  Eigen::MatrixXd values;  // K x K, symmetric PSD
};

// Centered second-moment matrix H X X^T H^T / D.
inline GramMatrix centered_gram(const EmbeddingSet& view) {
  Eigen::MatrixXd centered =
      view.matrix.rowwise() - view.matrix.colwise().mean();
  Eigen::MatrixXd g = centered * centered.transpose() /
                      static_cast<double>(view.dim());
  return GramMatrix{std::move(g)};
}

inline double linear_cka(const EmbeddingSet& x, const EmbeddingSet& y) {
  if (x.size() != y.size())
    throw Error("alignment", "views differ in sample count");
  if (x.size() < 2)
    throw Error("insufficient-data", "cka needs at least 2 samples");
  Eigen::MatrixXd gx = centered_gram(x).values;
  Eigen::MatrixXd gy = centered_gram(y).values;
  double nx = gx.norm();
  double ny = gy.norm();
  if (nx == 0.0 || ny == 0.0)
    throw Error("degenerate-view",
                "all rows of a view identical: zero centered Gram");
  return gx.cwiseProduct(gy).sum() / (nx * ny);
}

inline double linear_cka(const AlignedViews& views) {
  if (views.views.size() != 2)
    throw Error("alignment", "linear_cka expects exactly two views");
  return linear_cka(views.views[0], views.views[1]);
}

struct ConsistencyResult {
  Eigen::MatrixXd matrix;  // M x M, symmetric, unit diagonal
  double mean_offdiag = 0.0;
  std::size_t comparisons = 0;
};

// Pairwise CKA over all aligned views. Each pair is computed independently
// and written to a preassigned slot, so the thread count never changes the
// result.
inline ConsistencyResult consistency_matrix(
    const std::vector<EmbeddingSet>& views, unsigned threads = 1) {
  if (views.size() < 2)
    throw Error("alignment", "consistency needs at least two views");
  validate_alignment(views);

  const auto m = views.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);

  std::vector<double> values(pairs.size());
  std::vector<std::string> errors(pairs.size());
  auto work = [&](std::size_t p) {
    auto [i, j] = pairs[p];
    try {
      values[p] = linear_cka(views[i], views[j]);
    } catch (const Error& e) {
      errors[p] = "pair (" + std::to_string(i) + "," + std::to_string(j) +
                  "): " + e.what();
    }
  };
  if (threads <= 1) {
    for (std::size_t p = 0; p < pairs.size(); ++p) work(p);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (pairs.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t begin = t * chunk;
      std::size_t end = std::min(pairs.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        for (std::size_t p = begin; p < end; ++p) work(p);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors)
    if (!err.empty()) throw Error("degenerate-view", err);

  ConsistencyResult result;
  result.matrix = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(m));
  double sum = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    result.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        values[p];
    result.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
        values[p];
    sum += values[p];
  }
  result.comparisons = pairs.size();
  result.mean_offdiag = sum / static_cast<double>(pairs.size());
  return result;
}

}  // namespace geomlex
