#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>

#include "geomlex/corpus.hpp"
#include "geomlex/discrimination.hpp"
#include "geomlex/rng.hpp"
#include "geomlex/synth.hpp"

using namespace geomlex;

namespace {

double cosd(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return 1.0 - u.dot(v) / (u.norm() * v.norm());
}

// Brute-force CDI oracle: replays the same seeded cross draws and
// recomputes every distance with its own cosine.
double cdi_oracle(const EmbeddingSet& set, const CategoryIndex& index,
                  const std::string& label, std::uint64_t seed) {
  const auto& rows = index.groups.at(label);
  std::vector<Eigen::Index> outside;
  for (Eigen::Index r = 0; r < set.size(); ++r)
    if (set.labels[static_cast<std::size_t>(r)] != label) outside.push_back(r);
  SplitMix64 rng(derive_seed(seed, label));
  double sum = 0.0;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < rows.size(); ++b) {
      if (a == b) continue;
      Eigen::Index cross = outside[rng.next_below(outside.size())];
      sum += cosd(set.matrix.row(rows[a]), set.matrix.row(cross)) -
             cosd(set.matrix.row(rows[a]), set.matrix.row(rows[b]));
    }
  return sum / static_cast<double>(rows.size() * (rows.size() - 1));
}

// Exhaustive ranking oracle for query-based mAP.
double map_oracle(const EmbeddingSet& set) {
  double ap_sum = 0.0;
  std::size_t queries = 0;
  for (Eigen::Index q = 0; q < set.size(); ++q) {
    std::size_t partners = 0;
    for (Eigen::Index r = 0; r < set.size(); ++r)
      if (r != q && set.labels[static_cast<std::size_t>(r)] ==
                        set.labels[static_cast<std::size_t>(q)])
        ++partners;
    if (partners == 0) continue;
    std::vector<std::pair<double, Eigen::Index>> ranked;
    for (Eigen::Index r = 0; r < set.size(); ++r) {
      if (r == q) continue;
      ranked.emplace_back(1.0 - cosd(set.matrix.row(q), set.matrix.row(r)), r);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) {
                       if (a.first != b.first) return a.first > b.first;
                       return a.second < b.second;
                     });
    double precision_sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < ranked.size(); ++k)
      if (set.labels[static_cast<std::size_t>(ranked[k].second)] ==
          set.labels[static_cast<std::size_t>(q)]) {
        ++hits;
        precision_sum += static_cast<double>(hits) / static_cast<double>(k + 1);
      }
    ap_sum += precision_sum / static_cast<double>(hits);
    ++queries;
  }
  return ap_sum / static_cast<double>(queries);
}

EmbeddingSet orthogonal_clusters() {
  SynthSpec spec;
  spec.num_categories = 3;
  spec.exemplars_per_category = 4;
  spec.dim = 8;
  spec.utilized_dims = 8;
  spec.separation = 1.0;
  spec.within_spread = 0.0;
  spec.orthogonal_centroids = true;
  return generate(spec).first;
}

}  // namespace

TEST_CASE("cosine distance fixtures") {
  Eigen::VectorXd u(2), v(2);
  u << 3, 4;
  CHECK(cosine_distance(u, u) == doctest::Approx(0.0));
  u << 1, 0;
  v << 0, 1;
  CHECK(cosine_distance(u, v) == doctest::Approx(1.0));
  v << -1, 0;
  CHECK(cosine_distance(u, v) == doctest::Approx(2.0));
}

TEST_CASE("cosine distance rejects zero vectors and ignores scale") {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(2), u(2);
  u << 1, 2;
  try {
    cosine_distance(u, z);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "degenerate-vector");
  }
  Eigen::VectorXd v(2);
  v << 2, -1;
  CHECK(cosine_distance(u, v) ==
        doctest::Approx(cosine_distance(5.0 * u, 0.25 * v)).epsilon(1e-12));
}

TEST_CASE("cdi: orthogonal zero-spread clusters score 1") {
  auto set = orthogonal_clusters();
  auto index = CategoryIndex::build(set);
  for (const auto& [label, rows] : index.groups)
    CHECK(cdi_category(set, index, label, 0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cdi: identical embeddings everywhere score 0") {
  auto set = parse_embedding_set("a\t1\t1\na\t1\t1\nb\t1\t1\nb\t1\t1\n");
  auto index = CategoryIndex::build(set);
  CHECK(cdi_category(set, index, "a", 5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cdi error contracts") {
  auto set = parse_embedding_set("a\t1\t0\nb\t0\t1\nb\t0\t2\n");
  auto index = CategoryIndex::build(set);
  try {
    cdi_category(set, index, "a", 0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "insufficient-exemplars");
  }
  auto solo = parse_embedding_set("a\t1\t0\na\t0\t1\n");
  auto solo_index = CategoryIndex::build(solo);
  try {
    cdi_category(solo, solo_index, "a", 0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "no-contrast");
  }
}

TEST_CASE("cdi matches the seeded brute-force oracle") {
  SynthSpec spec;
  spec.num_categories = 7;
  spec.exemplars_per_category = 5;
  spec.dim = 12;
  spec.utilized_dims = 12;
  spec.separation = 1.0;
  spec.within_spread = 0.5;
  spec.seed = 77;
  auto [set, lexicon] = generate(spec);
  auto index = CategoryIndex::build(set);
  for (const auto& [label, rows] : index.groups)
    CHECK(cdi_category(set, index, label, 123) ==
          doctest::Approx(cdi_oracle(set, index, label, 123)).epsilon(1e-12));
}

TEST_CASE("cdi invariant to scaling and orthogonal transforms") {
  SynthSpec spec;
  spec.num_categories = 4;
  spec.exemplars_per_category = 4;
  spec.dim = 6;
  spec.utilized_dims = 6;
  spec.within_spread = 0.3;
  spec.seed = 5;
  auto [set, lexicon] = generate(spec);
  auto index = CategoryIndex::build(set);
  double base = cdi_category(set, index, "w0001", 9);

  EmbeddingSet scaled = set;
  scaled.matrix *= 4.2;
  CHECK(cdi_category(scaled, index, "w0001", 9) ==
        doctest::Approx(base).epsilon(1e-12));

  SplitMix64 rng(31);
  Eigen::MatrixXd g(6, 6);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) g(i, j) = rng.next_gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  EmbeddingSet rotated = set;
  rotated.matrix = set.matrix * Eigen::MatrixXd(qr.householderQ());
  CHECK(cdi_category(rotated, index, "w0001", 9) ==
        doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("cdi_all: orthogonal clusters give mean 1 std 0") {
  auto set = orthogonal_clusters();
  auto index = CategoryIndex::build(set);
  auto result = cdi_all(set, index, 0);
  CHECK(result.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.std_dev == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(result.per_category.size() == 3);
}

TEST_CASE("cdi_all skips singletons, errors when none eligible") {
  auto set = parse_embedding_set("a\t1\t0\na\t1\t0.1\nb\t0\t1\nc\t1\t1\n");
  auto index = CategoryIndex::build(set);
  auto result = cdi_all(set, index, 0);
  CHECK(result.per_category.size() == 1);
  CHECK(result.skipped == std::vector<std::string>{"b", "c"});

  auto singles = parse_embedding_set("a\t1\t0\nb\t0\t1\nc\t1\t1\n");
  try {
    cdi_all(singles, CategoryIndex::build(singles), 0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "no-eligible-categories");
  }
}

TEST_CASE("cdi_all mean/std consistent with per-category values") {
  SynthSpec spec;
  spec.num_categories = 5;
  spec.exemplars_per_category = 6;
  spec.dim = 8;
  spec.utilized_dims = 8;
  spec.within_spread = 0.4;
  spec.seed = 13;
  auto [set, lexicon] = generate(spec);
  auto index = CategoryIndex::build(set);
  auto result = cdi_all(set, index, 2);
  double sum = 0.0;
  for (const auto& [label, v] : result.per_category) {
    CHECK(v >= -2.0);
    CHECK(v <= 2.0);
    sum += v;
  }
  CHECK(result.mean ==
        doctest::Approx(sum / result.per_category.size()).epsilon(1e-12));
}

TEST_CASE("map: perfectly separated clusters score exactly 1") {
  auto set = orthogonal_clusters();
  auto index = CategoryIndex::build(set);
  CHECK(map_same_different(set, index) == 1.0);
}

TEST_CASE("map: all labels unique is an error") {
  auto set = parse_embedding_set("a\t1\t0\nb\t0\t1\nc\t1\t1\n");
  try {
    map_same_different(set, CategoryIndex::build(set));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "no-valid-queries");
  }
}

TEST_CASE("map: hand-enumerated 4-row fixture") {
  auto set =
      parse_embedding_set("a\t1\t0\na\t0.9\t0.1\nb\t0\t1\nb\t0.1\t0.9\n");
  auto index = CategoryIndex::build(set);
  // every query ranks its same-label partner first -> AP = 1 for all
  CHECK(map_same_different(set, index) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(map_same_different(set, index) ==
        doctest::Approx(map_oracle(set)).epsilon(1e-12));
}

TEST_CASE("map matches exhaustive oracle on noisy clusters") {
  SynthSpec spec;
  spec.num_categories = 6;
  spec.exemplars_per_category = 5;
  spec.dim = 4;
  spec.utilized_dims = 4;
  spec.separation = 0.8;
  spec.within_spread = 0.6;
  spec.seed = 99;
  auto [set, lexicon] = generate(spec);
  auto index = CategoryIndex::build(set);
  double value = map_same_different(set, index);
  CHECK(value == doctest::Approx(map_oracle(set)).epsilon(1e-12));
  CHECK(value >= 0.0);
  CHECK(value <= 1.0);
}

TEST_CASE("map: rows without partners remain as distractors") {
  auto set = parse_embedding_set(
      "a\t1\t0\na\t0.95\t0.05\nx\t0.97\t0.03\nb\t0\t1\n");
  auto index = CategoryIndex::build(set);
  // query a(0): ranking of others by similarity puts x before the partner
  double value = map_same_different(set, index);
  CHECK(value < 1.0);
  CHECK(value == doctest::Approx(map_oracle(set)).epsilon(1e-12));
}

TEST_CASE("map serial and threaded agree") {
  SynthSpec spec;
  spec.num_categories = 8;
  spec.exemplars_per_category = 6;
  spec.dim = 8;
  spec.utilized_dims = 8;
  spec.within_spread = 0.5;
  spec.seed = 3;
  auto [set, lexicon] = generate(spec);
  auto index = CategoryIndex::build(set);
  CHECK(map_same_different(set, index, 1) ==
        doctest::Approx(map_same_different(set, index, 4)).epsilon(1e-12));
}

TEST_CASE("centroids fixtures") {
  auto set = parse_embedding_set("a\t1\t0\na\t0\t1\nb\t2\t2\n");
  auto index = CategoryIndex::build(set);
  auto table = centroids(set, index);
  CHECK(table.centroids.at("a")(0) == doctest::Approx(0.5));
  CHECK(table.centroids.at("a")(1) == doctest::Approx(0.5));
  CHECK(table.centroids.at("b")(0) == doctest::Approx(2.0));
  CHECK(table.counts.at("a") == 2);
}

TEST_CASE("centroids match oracle means on synthetic data") {
  SynthSpec spec;
  spec.num_categories = 4;
  spec.exemplars_per_category = 7;
  spec.dim = 5;
  spec.utilized_dims = 5;
  spec.within_spread = 0.4;
  spec.seed = 11;
  auto [set, lexicon] = generate(spec);
  auto index = CategoryIndex::build(set);
  auto table = centroids(set, index);
  for (const auto& [label, rows] : index.groups) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(set.dim());
    for (auto r : rows) mean += set.matrix.row(r).transpose();
    mean /= static_cast<double>(rows.size());
    CHECK((table.centroids.at(label) - mean).norm() < 1e-12);
  }
}

TEST_CASE("nearest centroids: truncation, orthogonality, boundary") {
  auto set = parse_embedding_set("a\t1\t0\t0\nb\t0\t1\t0\nc\t0\t0\t1\n");
  auto index = CategoryIndex::build(set);
  auto table = centroids(set, index);
  auto ranked = nearest_centroids(table, "a", 10);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].second == doctest::Approx(0.0));
  CHECK(ranked[1].second == doctest::Approx(0.0));
  // tie broken lexicographically
  CHECK(ranked[0].first == "b");
  CHECK(ranked[1].first == "c");

  auto solo = parse_embedding_set("only\t1\t0\n");
  auto solo_table = centroids(solo, CategoryIndex::build(solo));
  CHECK(nearest_centroids(solo_table, "only", 5).empty());
}

TEST_CASE("nearest centroids: unknown query raises not-found") {
  auto set = parse_embedding_set("apple\t1\t0\nbanana\t0\t1\n");
  auto table = centroids(set, CategoryIndex::build(set));
  try {
    nearest_centroids(table, "avocado", 3);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "not-found");
  }
}

TEST_CASE("nearest centroids match an exhaustive sort oracle") {
  SynthSpec spec;
  spec.num_categories = 9;
  spec.exemplars_per_category = 4;
  spec.dim = 6;
  spec.utilized_dims = 6;
  spec.within_spread = 0.3;
  spec.seed = 8;
  auto [set, lexicon] = generate(spec);
  auto table = centroids(set, CategoryIndex::build(set));
  auto ranked = nearest_centroids(table, "w0003", 5);
  std::vector<std::pair<std::string, double>> oracle;
  for (const auto& [label, centroid] : table.centroids)
    if (label != "w0003")
      oracle.emplace_back(
          label, 1.0 - cosd(table.centroids.at("w0003"), centroid));
  std::sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  oracle.resize(5);
  REQUIRE(ranked.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(ranked[i].first == oracle[i].first);
    CHECK(ranked[i].second == doctest::Approx(oracle[i].second).epsilon(1e-12));
  }
}
