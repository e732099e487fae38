#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "geomlex/corpus.hpp"
#include "geomlex/discrimination.hpp"
#include "geomlex/error.hpp"
#include "geomlex/phonology.hpp"

namespace geomlex {

namespace detail {

// Regularized incomplete beta I_x(a, b) via the standard continued fraction
// (modified Lentz), relative tolerance 1e-12.
inline double incomplete_beta_cf(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr int max_terms = 500;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double result = d;
  for (int m = 1; m <= max_terms; ++m) {
    double dm = static_cast<double>(m);
    // even term
    double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    result *= d * c;
    // odd term
    num = -(a + dm) * (a + b + dm) * x /
          ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    result *= delta;
    if (std::fabs(delta - 1.0) < 1e-12) break;
  }
  return result;
}

inline double regularized_incomplete_beta(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                     a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * incomplete_beta_cf(x, a, b) / a;
  return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                        b * std::log1p(-x) + a * std::log(x)) *
                   incomplete_beta_cf(1.0 - x, b, a) / b;
}

}  // namespace detail

// Two-tailed p-value of a t statistic with nu degrees of freedom.
inline double student_t_two_tailed(double t, double nu) {
  double x = nu / (nu + t * t);
  return detail::regularized_incomplete_beta(x, nu / 2.0, 0.5);
}

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  bool significant_05 = false;
  bool significant_001 = false;
};

inline CorrelationResult pearson(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  if (x.size() != y.size())
    throw Error("validation", "series length mismatch: " +
                                  std::to_string(x.size()) + " vs " +
                                  std::to_string(y.size()));
  std::size_t n = x.size();
  if (n < 3) throw Error("validation", "pearson needs at least 3 samples");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error("constant-series", "a series has zero variance");

  CorrelationResult result;
  result.n = n;
  result.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  double nu = static_cast<double>(n - 2);
  if (std::fabs(result.r) >= 1.0) {
    result.t_statistic = std::copysign(
        std::numeric_limits<double>::infinity(), result.r);
    result.p_value = std::numeric_limits<double>::min();
  } else {
    result.t_statistic =
        result.r * std::sqrt(nu / (1.0 - result.r * result.r));
    result.p_value = student_t_two_tailed(result.t_statistic, nu);
    if (result.p_value <= 0.0)
      result.p_value = std::numeric_limits<double>::min();
  }
  result.significant_05 = result.p_value < 0.05;
  result.significant_001 = result.p_value < 0.001;
  return result;
}

struct PredictorRow {
  std::string word;
  double cdi = 0.0;
  double frequency = 0.0;  // exemplar count
  double length = 0.0;     // phoneme count
  double pic = 0.0;
};

struct PredictorTable {
  std::vector<PredictorRow> rows;
  std::vector<std::pair<std::string, std::string>> skipped;  // word, reason
};

// One row per word type that has both a CDI value and a pronunciation.
inline PredictorTable build_predictor_table(const CdiResult& cdi,
                                            const CategoryIndex& index,
                                            const Lexicon& lexicon,
                                            const TrigramPLM& plm) {
  PredictorTable table;
  for (const auto& [word, cdi_value] : cdi.per_category) {
    auto lex_it = lexicon.entries.find(word);
    if (lex_it == lexicon.entries.end()) {
      table.skipped.emplace_back(word, "no pronunciation");
      continue;
    }
    PredictorRow row;
    row.word = word;
    row.cdi = cdi_value;
    row.frequency = static_cast<double>(index.groups.at(word).size());
    row.length = static_cast<double>(word_length(lex_it->second));
    row.pic = pic(plm, lex_it->second);
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty())
    throw Error("no-overlap", "no word type has both a CDI value and a "
                              "pronunciation");
  return table;
}

struct RunSummary {
  double mean = 0.0;
  double max = 0.0;
  double min = 0.0;
  double std_dev = 0.0;  // population
};

inline RunSummary run_summary(const std::vector<double>& values) {
  if (values.empty()) throw Error("validation", "empty value series");
  RunSummary s;
  s.max = values.front();
  s.min = values.front();
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    s.max = std::max(s.max, v);
    s.min = std::min(s.min, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std_dev = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

}  // namespace geomlex
