#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geomlex/error.hpp"

namespace geomlex {

struct PhonemeSequence {
  std::vector<std::string> symbols;

  std::size_t length() const { return symbols.size(); }
};

struct Lexicon {
  std::map<std::string, PhonemeSequence> entries;
  std::size_t duplicates = 0;  // overwritten entries seen while loading
};

// N labeled D-dimensional embeddings, immutable after construction.
struct EmbeddingSet {
  std::vector<std::string> labels;
  Eigen::MatrixXd matrix;  // N x D

  Eigen::Index size() const { return matrix.rows(); }
  Eigen::Index dim() const { return matrix.cols(); }
};

// Partition of row indices by word-type label.
struct CategoryIndex {
  std::map<std::string, std::vector<Eigen::Index>> groups;

  static CategoryIndex build(const EmbeddingSet& set) {
    CategoryIndex index;
    for (Eigen::Index i = 0; i < set.size(); ++i)
      index.groups[set.labels[static_cast<std::size_t>(i)]].push_back(i);
    return index;
  }
};

// Two or more same-order views of the same samples.
struct AlignedViews {
  std::vector<EmbeddingSet> views;

  Eigen::Index sample_count() const { return views.front().size(); }
};

namespace detail {

inline double parse_double(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw Error("parse-error", "non-numeric token '" + std::string(token) +
                                   "' at line " + std::to_string(line_no));
  if (!std::isfinite(value))
    throw Error("parse-error",
                "non-finite value at line " + std::to_string(line_no));
  return value;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io-error", "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Splits on LF; a trailing final newline does not produce an empty line.
inline std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t pos = text.find('\n', start);
    if (pos == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return lines;
}

}  // namespace detail

inline EmbeddingSet parse_embedding_set(std::string_view text) {
  auto lines = detail::lines_of(text);
  if (lines.empty()) throw Error("empty-input", "embedding file is empty");

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  Eigen::Index dim = -1;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    auto fields = detail::split(lines[li], '\t');
    if (fields.size() < 2)
      throw Error("parse-error",
                  "expected label and components at line " +
                      std::to_string(li + 1));
    auto d = static_cast<Eigen::Index>(fields.size() - 1);
    if (dim < 0)
      dim = d;
    else if (d != dim)
      throw Error("dimension-mismatch",
                  "line " + std::to_string(li + 1) + " has " +
                      std::to_string(d) + " components, expected " +
                      std::to_string(dim));
    labels.emplace_back(fields[0]);
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(d));
    for (std::size_t f = 1; f < fields.size(); ++f)
      row.push_back(detail::parse_double(fields[f], li + 1));
    rows.push_back(std::move(row));
  }

  EmbeddingSet set;
  set.labels = std::move(labels);
  set.matrix.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      set.matrix(static_cast<Eigen::Index>(i), j) =
          rows[i][static_cast<std::size_t>(j)];
  return set;
}

inline EmbeddingSet load_embedding_set(const std::string& path) {
  return parse_embedding_set(detail::read_file(path));
}

inline Lexicon parse_lexicon(std::string_view text) {
  Lexicon lex;
  auto lines = detail::lines_of(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw Error("parse-error",
                  "missing tab separator at line " + std::to_string(li + 1));
    std::string word(line.substr(0, tab));
    PhonemeSequence seq;
    for (auto token : detail::split(line.substr(tab + 1), ' '))
      if (!token.empty()) seq.symbols.emplace_back(token);
    if (seq.symbols.empty())
      throw Error("validation",
                  "empty pronunciation at line " + std::to_string(li + 1));
    if (lex.entries.count(word)) ++lex.duplicates;  // last wins
    lex.entries[word] = std::move(seq);
  }
  return lex;
}

inline Lexicon load_lexicon(const std::string& path) {
  return parse_lexicon(detail::read_file(path));
}

inline std::string format_component(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_embedding_set(std::ostream& out, const EmbeddingSet& set) {
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    out << set.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < set.dim(); ++j)
      out << '\t' << format_component(set.matrix(i, j));
    out << '\n';
  }
}

inline void write_embedding_set(const std::string& path,
                                const EmbeddingSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io-error", "cannot write file: " + path);
  write_embedding_set(out, set);
}

inline void write_lexicon(std::ostream& out, const Lexicon& lex) {
  for (const auto& [word, seq] : lex.entries) {
    out << word << '\t';
    for (std::size_t i = 0; i < seq.symbols.size(); ++i) {
      if (i) out << ' ';
      out << seq.symbols[i];
    }
    out << '\n';
  }
}

inline void write_lexicon(const std::string& path, const Lexicon& lex) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io-error", "cannot write file: " + path);
  write_lexicon(out, lex);
}

// Validates that all sets embed the same samples in the same order.
inline void validate_alignment(const std::vector<EmbeddingSet>& sets) {
  if (sets.size() < 2)
    throw Error("alignment", "need at least two views to align");
  const auto& ref = sets.front();
  for (std::size_t v = 1; v < sets.size(); ++v) {
    if (sets[v].size() != ref.size())
      throw Error("alignment",
                  "view " + std::to_string(v) + " has " +
                      std::to_string(sets[v].size()) + " rows, expected " +
                      std::to_string(ref.size()));
    for (std::size_t i = 0; i < ref.labels.size(); ++i)
      if (sets[v].labels[i] != ref.labels[i])
        throw Error("alignment", "label mismatch at row " + std::to_string(i) +
                                     " of view " + std::to_string(v) + ": '" +
                                     sets[v].labels[i] + "' vs '" +
                                     ref.labels[i] + "'");
  }
}

inline AlignedViews align_views(std::vector<EmbeddingSet> sets) {
  validate_alignment(sets);
  return AlignedViews{std::move(sets)};
}

// Unlabeled numeric TSV, one row per line. Used for feature/probability
// sequences fed to the loss functions.
inline Eigen::MatrixXd load_matrix_tsv(const std::string& path) {
  auto text = detail::read_file(path);
  auto lines = detail::lines_of(text);
  if (lines.empty()) throw Error("empty-input", "matrix file is empty");
  std::vector<std::vector<double>> rows;
  Eigen::Index dim = -1;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    auto fields = detail::split(lines[li], '\t');
    auto d = static_cast<Eigen::Index>(fields.size());
    if (dim < 0)
      dim = d;
    else if (d != dim)
      throw Error("dimension-mismatch",
                  "line " + std::to_string(li + 1) + " has " +
                      std::to_string(d) + " components, expected " +
                      std::to_string(dim));
    std::vector<double> row;
    for (auto f : fields) row.push_back(detail::parse_double(f, li + 1));
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      m(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  return m;
}

}  // namespace geomlex
