#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "geomlex/geomlex.hpp"

namespace {

using geomlex::AnalysisReport;

std::string slurp(const std::string& path) {
  return geomlex::detail::read_file(path);
}

void emit(const AnalysisReport& report, const std::string& output_path) {
  std::string json = report.to_json();
  if (output_path.empty()) {
    std::cout << json << '\n';
  } else {
    std::ofstream out(output_path, std::ios::binary);
    if (!out)
      throw geomlex::Error("io-error", "cannot write file: " + output_path);
    out << json << '\n';
  }
}

geomlex::CdiResult cdi_with_floor(const geomlex::EmbeddingSet& set,
                                  const geomlex::CategoryIndex& index,
                                  std::uint64_t seed,
                                  std::size_t min_exemplars) {
  auto result = geomlex::cdi_all(set, index, seed);
  if (min_exemplars > 2) {
    for (auto it = result.per_category.begin();
         it != result.per_category.end();) {
      if (index.groups.at(it->first).size() < min_exemplars) {
        result.skipped.push_back(it->first);
        result.pairs_evaluated.erase(it->first);
        it = result.per_category.erase(it);
      } else {
        ++it;
      }
    }
    if (result.per_category.empty())
      throw geomlex::Error("no-eligible-categories",
                           "min-exemplars floor removed every category");
    double sum = 0.0;
    for (const auto& [label, v] : result.per_category) sum += v;
    auto n = static_cast<double>(result.per_category.size());
    result.mean = sum / n;
    double ss = 0.0;
    for (const auto& [label, v] : result.per_category)
      ss += (v - result.mean) * (v - result.mean);
    result.std_dev = std::sqrt(ss / n);
  }
  return result;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

geomlex::PhonemeSequence parse_word(const std::string& spaced) {
  geomlex::PhonemeSequence seq;
  for (auto token : geomlex::detail::split(spaced, ' '))
    if (!token.empty()) seq.symbols.emplace_back(token);
  if (seq.symbols.empty())
    throw geomlex::Error("validation", "empty phoneme sequence");
  return seq;
}

int run(int argc, char** argv) {
  CLI::App app{"Representational-geometry analyses for labeled embedding sets"};
  app.require_subcommand(1);

  std::string embeddings_path, lexicon_path, words_path, output_path;
  std::string path_a, path_b, query;
  std::vector<std::string> input_paths;
  std::vector<double> values;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t max_pairs = 10000, bins = 100, top_k = 10, min_exemplars = 0;
  double smoothing_k = 1.0;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--output", output_path, "Write the report here instead of stdout");
  };

  // --- isoscore ----------------------------------------------------------
  auto* cmd_iso = app.add_subcommand("isoscore", "Isotropy score of an embedding set");
  cmd_iso->add_option("--embeddings", embeddings_path, "Embedding TSV")->required();
  add_output(cmd_iso);
  cmd_iso->callback([&] {
    auto text = slurp(embeddings_path);
    auto set = geomlex::parse_embedding_set(text);
    AnalysisReport report;
    report.tool = "isoscore";
    report.add_input("embeddings", text);
    report.add_scalar("isoscore", geomlex::isoscore(set));
    emit(report, output_path);
  });

  // --- simdist -----------------------------------------------------------
  auto* cmd_sim = app.add_subcommand(
      "simdist", "Within- vs cross-category cosine similarity distributions");
  cmd_sim->add_option("--embeddings", embeddings_path, "Embedding TSV")->required();
  cmd_sim->add_option("--max-pairs", max_pairs, "Pair cap per group");
  cmd_sim->add_option("--seed", seed, "Sampling seed");
  cmd_sim->add_option("--bins", bins, "Histogram bins over [-1, 1]");
  add_output(cmd_sim);
  cmd_sim->callback([&] {
    auto text = slurp(embeddings_path);
    auto set = geomlex::parse_embedding_set(text);
    auto index = geomlex::CategoryIndex::build(set);
    auto stats =
        geomlex::similarity_distributions(set, index, max_pairs, seed, bins);
    AnalysisReport report;
    report.tool = "simdist";
    report.add_input("embeddings", text);
    report.add_param("max_pairs", static_cast<std::int64_t>(max_pairs));
    report.add_param("seed", static_cast<std::int64_t>(seed));
    report.add_param("bins", static_cast<std::int64_t>(bins));
    report.add_scalar("within_mean", stats.within_mean);
    report.add_scalar("cross_mean", stats.cross_mean);
    report.add_scalar("mean_difference", stats.mean_difference);
    AnalysisReport::Table hist;
    hist.name = "similarity_histogram";
    hist.columns = {"bin_low", "bin_high", "within_count", "cross_count"};
    for (std::size_t b = 0; b < bins; ++b) {
      double lo = -1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(bins);
      double hi = -1.0 + 2.0 * static_cast<double>(b + 1) / static_cast<double>(bins);
      hist.rows.push_back({lo, hi,
                           static_cast<double>(stats.within_histogram[b]),
                           static_cast<double>(stats.cross_histogram[b])});
    }
    report.tables.push_back(std::move(hist));
    emit(report, output_path);
  });

  // --- cka ---------------------------------------------------------------
  auto* cmd_cka = app.add_subcommand("cka", "Linear CKA between two aligned views");
  cmd_cka->add_option("--a", path_a, "First view TSV")->required();
  cmd_cka->add_option("--b", path_b, "Second view TSV")->required();
  add_output(cmd_cka);
  cmd_cka->callback([&] {
    auto text_a = slurp(path_a);
    auto text_b = slurp(path_b);
    auto views = geomlex::align_views(
        {geomlex::parse_embedding_set(text_a), geomlex::parse_embedding_set(text_b)});
    AnalysisReport report;
    report.tool = "cka";
    report.add_input("a", text_a);
    report.add_input("b", text_b);
    report.add_scalar("cka", geomlex::linear_cka(views));
    emit(report, output_path);
  });

  // --- consistency -------------------------------------------------------
  auto* cmd_con = app.add_subcommand(
      "consistency", "Pairwise CKA matrix over aligned views");
  cmd_con->add_option("--inputs", input_paths, "Two or more view TSVs")
      ->required()
      ->expected(2, -1);
  cmd_con->add_option("--threads", threads, "Worker threads (1 = reference)");
  add_output(cmd_con);
  cmd_con->callback([&] {
    std::vector<geomlex::EmbeddingSet> views;
    AnalysisReport report;
    report.tool = "consistency";
    for (std::size_t i = 0; i < input_paths.size(); ++i) {
      auto text = slurp(input_paths[i]);
      report.add_input("view" + std::to_string(i), text);
      views.push_back(geomlex::parse_embedding_set(text));
    }
    report.add_param("threads", static_cast<std::int64_t>(threads));
    auto result = geomlex::consistency_matrix(views, threads);
    report.add_scalar("mean_cka", result.mean_offdiag);
    report.add_scalar("comparisons", static_cast<double>(result.comparisons));
    AnalysisReport::Table table;
    table.name = "consistency_matrix";
    for (std::size_t i = 0; i < input_paths.size(); ++i)
      table.columns.push_back("view" + std::to_string(i));
    for (Eigen::Index i = 0; i < result.matrix.rows(); ++i) {
      std::vector<double> row;
      for (Eigen::Index j = 0; j < result.matrix.cols(); ++j)
        row.push_back(result.matrix(i, j));
      table.rows.push_back(std::move(row));
    }
    report.tables.push_back(std::move(table));
    emit(report, output_path);
  });

  // --- cdi ---------------------------------------------------------------
  auto* cmd_cdi = app.add_subcommand("cdi", "Category discriminability index");
  cmd_cdi->add_option("--embeddings", embeddings_path, "Embedding TSV")->required();
  cmd_cdi->add_option("--seed", seed, "Cross-draw seed");
  cmd_cdi->add_option("--min-exemplars", min_exemplars, "Skip categories below this count");
  add_output(cmd_cdi);
  cmd_cdi->callback([&] {
    auto text = slurp(embeddings_path);
    auto set = geomlex::parse_embedding_set(text);
    auto index = geomlex::CategoryIndex::build(set);
    auto result = cdi_with_floor(set, index, seed, min_exemplars);
    AnalysisReport report;
    report.tool = "cdi";
    report.add_input("embeddings", text);
    report.add_param("seed", static_cast<std::int64_t>(seed));
    report.add_param("min_exemplars", static_cast<std::int64_t>(min_exemplars));
    report.add_param("skipped", join(result.skipped));
    report.add_scalar("cdi_mean", result.mean);
    report.add_scalar("cdi_std", result.std_dev);
    AnalysisReport::Table table;
    table.name = "cdi_per_category";
    table.columns = {"cdi", "pairs_evaluated"};
    for (const auto& [label, value] : result.per_category) {
      table.row_labels.push_back(label);
      table.rows.push_back(
          {value, static_cast<double>(result.pairs_evaluated.at(label))});
    }
    report.tables.push_back(std::move(table));
    emit(report, output_path);
  });

  // --- map ---------------------------------------------------------------
  auto* cmd_map = app.add_subcommand(
      "map", "Same-different word discrimination (mean average precision)");
  cmd_map->add_option("--embeddings", embeddings_path, "Embedding TSV")->required();
  cmd_map->add_option("--threads", threads, "Worker threads (1 = reference)");
  add_output(cmd_map);
  cmd_map->callback([&] {
    auto text = slurp(embeddings_path);
    auto set = geomlex::parse_embedding_set(text);
    auto index = geomlex::CategoryIndex::build(set);
    AnalysisReport report;
    report.tool = "map";
    report.add_input("embeddings", text);
    report.add_param("variant", std::string("query-based"));
    report.add_param("threads", static_cast<std::int64_t>(threads));
    report.add_scalar("map", geomlex::map_same_different(set, index, threads));
    emit(report, output_path);
  });

  // --- centroids ---------------------------------------------------------
  auto* cmd_cen = app.add_subcommand("centroids", "Per-category mean embeddings");
  cmd_cen->add_option("--embeddings", embeddings_path, "Embedding TSV")->required();
  add_output(cmd_cen);
  cmd_cen->callback([&] {
    auto text = slurp(embeddings_path);
    auto set = geomlex::parse_embedding_set(text);
    auto index = geomlex::CategoryIndex::build(set);
    auto table = geomlex::centroids(set, index);
    AnalysisReport report;
    report.tool = "centroids";
    report.add_input("embeddings", text);
    AnalysisReport::Table out;
    out.name = "centroids";
    out.columns.push_back("count");
    for (Eigen::Index d = 0; d < set.dim(); ++d)
      out.columns.push_back("c" + std::to_string(d));
    for (const auto& [label, centroid] : table.centroids) {
      out.row_labels.push_back(label);
      std::vector<double> row{static_cast<double>(table.counts.at(label))};
      for (Eigen::Index d = 0; d < centroid.size(); ++d)
        row.push_back(centroid(d));
      out.rows.push_back(std::move(row));
    }
    report.tables.push_back(std::move(out));
    emit(report, output_path);
  });

  // --- neighbors ---------------------------------------------------------
  auto* cmd_nn = app.add_subcommand(
      "neighbors", "Top-k nearest category centroids to a query category");
  cmd_nn->add_option("--embeddings", embeddings_path, "Embedding TSV")->required();
  cmd_nn->add_option("--query", query, "Query word type")->required();
  cmd_nn->add_option("--k", top_k, "Neighbors to return");
  add_output(cmd_nn);
  cmd_nn->callback([&] {
    auto text = slurp(embeddings_path);
    auto set = geomlex::parse_embedding_set(text);
    auto index = geomlex::CategoryIndex::build(set);
    auto ranked =
        geomlex::nearest_centroids(geomlex::centroids(set, index), query, top_k);
    AnalysisReport report;
    report.tool = "neighbors";
    report.add_input("embeddings", text);
    report.add_param("query", query);
    report.add_param("k", static_cast<std::int64_t>(top_k));
    AnalysisReport::Table table;
    table.name = "neighbors";
    table.columns = {"rank", "similarity"};
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      table.row_labels.push_back(ranked[i].first);
      table.rows.push_back({static_cast<double>(i + 1), ranked[i].second});
    }
    report.tables.push_back(std::move(table));
    emit(report, output_path);
  });

  // --- fit-plm -----------------------------------------------------------
  auto* cmd_plm = app.add_subcommand("fit-plm", "Fit a trigram phoneme language model");
  cmd_plm->add_option("--lexicon", lexicon_path, "Lexicon TSV")->required();
  cmd_plm->add_option("--k", smoothing_k, "Add-k smoothing constant");
  add_output(cmd_plm);
  cmd_plm->callback([&] {
    auto text = slurp(lexicon_path);
    auto lexicon = geomlex::parse_lexicon(text);
    auto model = geomlex::fit_trigram(lexicon, smoothing_k);
    AnalysisReport report;
    report.tool = "fit-plm";
    report.add_input("lexicon", text);
    report.add_param("k", smoothing_k);
    report.add_param("log_base", std::string("e"));
    report.add_param("smoothing", std::string("add-k"));
    report.add_param("duplicates",
                     static_cast<std::int64_t>(lexicon.duplicates));
    std::size_t trigrams = 0;
    for (const auto& [ctx, total] : model.totals()) trigrams += total;
    report.add_scalar("inventory_size",
                      static_cast<double>(model.inventory().size()));
    report.add_scalar("contexts", static_cast<double>(model.totals().size()));
    report.add_scalar("trigrams", static_cast<double>(trigrams));
    emit(report, output_path);
  });

  // --- pic ---------------------------------------------------------------
  auto* cmd_pic = app.add_subcommand(
      "pic", "Phonological information content per word");
  cmd_pic->add_option("--lexicon", lexicon_path, "Training lexicon TSV")->required();
  cmd_pic->add_option("--words", words_path,
                      "Lexicon TSV of words to score (default: training lexicon)");
  cmd_pic->add_option("--k", smoothing_k, "Add-k smoothing constant");
  add_output(cmd_pic);
  cmd_pic->callback([&] {
    auto text = slurp(lexicon_path);
    auto training = geomlex::parse_lexicon(text);
    auto model = geomlex::fit_trigram(training, smoothing_k);
    AnalysisReport report;
    report.tool = "pic";
    report.add_input("lexicon", text);
    const geomlex::Lexicon* target = &training;
    geomlex::Lexicon scored;
    if (!words_path.empty()) {
      auto words_text = slurp(words_path);
      report.add_input("words", words_text);
      scored = geomlex::parse_lexicon(words_text);
      target = &scored;
    }
    report.add_param("k", smoothing_k);
    report.add_param("log_base", std::string("e"));
    AnalysisReport::Table table;
    table.name = "pic_per_word";
    table.columns = {"length", "pic"};
    for (const auto& [word, seq] : target->entries) {
      table.row_labels.push_back(word);
      table.rows.push_back({static_cast<double>(geomlex::word_length(seq)),
                            geomlex::pic(model, seq)});
    }
    report.tables.push_back(std::move(table));
    emit(report, output_path);
  });

  // --- predictors --------------------------------------------------------
  auto* cmd_pred = app.add_subcommand(
      "predictors", "Per-category CDI with frequency, length, and PIC");
  cmd_pred->add_option("--embeddings", embeddings_path, "Embedding TSV")->required();
  cmd_pred->add_option("--lexicon", lexicon_path, "Lexicon TSV")->required();
  cmd_pred->add_option("--seed", seed, "CDI cross-draw seed");
  cmd_pred->add_option("--k", smoothing_k, "PLM smoothing constant");
  cmd_pred->add_option("--min-exemplars", min_exemplars,
                       "Skip categories below this count");
  add_output(cmd_pred);
  auto build_predictors = [&](AnalysisReport& report) {
    auto text = slurp(embeddings_path);
    auto lex_text = slurp(lexicon_path);
    auto set = geomlex::parse_embedding_set(text);
    auto lexicon = geomlex::parse_lexicon(lex_text);
    auto index = geomlex::CategoryIndex::build(set);
    auto cdi = cdi_with_floor(set, index, seed, min_exemplars);
    auto model = geomlex::fit_trigram(lexicon, smoothing_k);
    report.add_input("embeddings", text);
    report.add_input("lexicon", lex_text);
    report.add_param("seed", static_cast<std::int64_t>(seed));
    report.add_param("k", smoothing_k);
    report.add_param("min_exemplars", static_cast<std::int64_t>(min_exemplars));
    report.add_param("log_base", std::string("e"));
    return geomlex::build_predictor_table(cdi, index, lexicon, model);
  };
  cmd_pred->callback([&] {
    AnalysisReport report;
    report.tool = "predictors";
    auto table = build_predictors(report);
    std::vector<std::string> skipped;
    for (const auto& [word, reason] : table.skipped) skipped.push_back(word);
    report.add_param("skipped", join(skipped));
    AnalysisReport::Table out;
    out.name = "predictors";
    out.columns = {"cdi", "frequency", "length", "pic"};
    for (const auto& row : table.rows) {
      out.row_labels.push_back(row.word);
      out.rows.push_back({row.cdi, row.frequency, row.length, row.pic});
    }
    report.tables.push_back(std::move(out));
    emit(report, output_path);
  });

  // --- correlate ---------------------------------------------------------
  auto* cmd_corr = app.add_subcommand(
      "correlate", "Pearson correlation of CDI against lexical predictors");
  cmd_corr->add_option("--embeddings", embeddings_path, "Embedding TSV")->required();
  cmd_corr->add_option("--lexicon", lexicon_path, "Lexicon TSV")->required();
  cmd_corr->add_option("--seed", seed, "CDI cross-draw seed");
  cmd_corr->add_option("--k", smoothing_k, "PLM smoothing constant");
  cmd_corr->add_option("--min-exemplars", min_exemplars,
                       "Skip categories below this count");
  add_output(cmd_corr);
  cmd_corr->callback([&] {
    AnalysisReport report;
    report.tool = "correlate";
    auto table = build_predictors(report);
    std::vector<double> cdi_values, frequency, length, pic_values;
    for (const auto& row : table.rows) {
      cdi_values.push_back(row.cdi);
      frequency.push_back(row.frequency);
      length.push_back(row.length);
      pic_values.push_back(row.pic);
    }
    AnalysisReport::Table out;
    out.name = "correlations";
    out.columns = {"r", "p", "flag"};
    auto add_row = [&](const std::string& predictor,
                       const std::vector<double>& series) {
      auto result = geomlex::pearson(cdi_values, series);
      double flag = result.significant_001 ? 2.0
                    : result.significant_05 ? 1.0
                                            : 0.0;
      out.row_labels.push_back(predictor);
      out.rows.push_back({result.r, result.p_value, flag});
    };
    add_row("frequency", frequency);
    add_row("length", length);
    add_row("pic", pic_values);
    report.tables.push_back(std::move(out));
    emit(report, output_path);
  });

  // --- summary -----------------------------------------------------------
  auto* cmd_sum = app.add_subcommand(
      "summary", "Mean/max/min/std over a series of run results");
  cmd_sum->add_option("--values", values, "Numeric series")
      ->required()
      ->expected(1, -1);
  add_output(cmd_sum);
  cmd_sum->callback([&] {
    auto s = geomlex::run_summary(values);
    AnalysisReport report;
    report.tool = "summary";
    report.add_param("n", static_cast<std::int64_t>(values.size()));
    report.add_param("std", std::string("population"));
    report.add_scalar("mean", s.mean);
    report.add_scalar("max", s.max);
    report.add_scalar("min", s.min);
    report.add_scalar("std", s.std_dev);
    emit(report, output_path);
  });

  // --- losses ------------------------------------------------------------
  auto* cmd_loss = app.add_subcommand(
      "losses", "Spot-check the training loss functions on TSV inputs");
  std::string kind, predicted_path, target_path, probs_path, pairs_path;
  std::string target_word, inventory_spec;
  double margin = 0.4;
  cmd_loss->add_option("--kind", kind, "reconstruction | decoding | triplet")
      ->required()
      ->check(CLI::IsMember({"reconstruction", "decoding", "triplet"}));
  cmd_loss->add_option("--predicted", predicted_path, "Predicted frames TSV");
  cmd_loss->add_option("--target", target_path, "Target frames TSV");
  cmd_loss->add_option("--probs", probs_path, "Per-step probability TSV");
  cmd_loss->add_option("--target-word", target_word,
                       "Space-separated target phonemes");
  cmd_loss->add_option("--inventory", inventory_spec,
                       "Space-separated label inventory (column order)");
  cmd_loss->add_option("--embeddings", embeddings_path, "Batch embedding TSV");
  cmd_loss->add_option("--pairs", pairs_path,
                       "Anchor/positive row index pairs TSV");
  cmd_loss->add_option("--margin", margin, "Triplet margin");
  add_output(cmd_loss);
  cmd_loss->callback([&] {
    AnalysisReport report;
    report.tool = "losses";
    report.add_param("kind", kind);
    if (kind == "reconstruction") {
      if (predicted_path.empty() || target_path.empty())
        throw geomlex::Error("validation",
                             "reconstruction needs --predicted and --target");
      auto pred_text = slurp(predicted_path);
      auto targ_text = slurp(target_path);
      report.add_input("predicted", pred_text);
      report.add_input("target", targ_text);
      geomlex::FeatureSequence predicted{geomlex::load_matrix_tsv(predicted_path)};
      geomlex::FeatureSequence target{geomlex::load_matrix_tsv(target_path)};
      report.add_scalar("loss", geomlex::reconstruction_loss(predicted, target));
    } else if (kind == "decoding") {
      if (probs_path.empty() || target_word.empty() || inventory_spec.empty())
        throw geomlex::Error(
            "validation",
            "decoding needs --probs, --target-word, and --inventory");
      auto probs_text = slurp(probs_path);
      report.add_input("probs", probs_text);
      report.add_param("inventory", inventory_spec);
      report.add_param("target_word", target_word);
      geomlex::ProbSequence probs{geomlex::load_matrix_tsv(probs_path)};
      auto inventory_seq = parse_word(inventory_spec);
      std::map<std::string, Eigen::Index> inventory;
      for (std::size_t i = 0; i < inventory_seq.symbols.size(); ++i)
        inventory[inventory_seq.symbols[i]] = static_cast<Eigen::Index>(i);
      report.add_scalar("loss",
                        geomlex::phonological_decoding_loss(
                            probs, parse_word(target_word), inventory));
    } else {
      if (embeddings_path.empty() || pairs_path.empty())
        throw geomlex::Error("validation",
                             "triplet needs --embeddings and --pairs");
      auto emb_text = slurp(embeddings_path);
      auto pairs_text = slurp(pairs_path);
      report.add_input("embeddings", emb_text);
      report.add_input("pairs", pairs_text);
      report.add_param("margin", margin);
      auto batch = geomlex::parse_embedding_set(emb_text);
      auto pair_matrix = geomlex::load_matrix_tsv(pairs_path);
      if (pair_matrix.cols() != 2)
        throw geomlex::Error("validation",
                             "pairs TSV must have exactly two columns");
      std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
      for (Eigen::Index i = 0; i < pair_matrix.rows(); ++i)
        pairs.emplace_back(static_cast<Eigen::Index>(pair_matrix(i, 0)),
                           static_cast<Eigen::Index>(pair_matrix(i, 1)));
      auto result =
          geomlex::triplet_loss_batch(batch, pairs, geomlex::TripletConfig{margin});
      report.add_scalar("loss", result.loss);
      AnalysisReport::Table table;
      table.name = "chosen_negatives";
      table.columns = {"anchor", "positive", "negative"};
      for (std::size_t i = 0; i < pairs.size(); ++i)
        table.rows.push_back({static_cast<double>(pairs[i].first),
                              static_cast<double>(pairs[i].second),
                              static_cast<double>(result.chosen_negatives[i])});
      report.tables.push_back(std::move(table));
    }
    emit(report, output_path);
  });

  // --- synth -------------------------------------------------------------
  auto* cmd_synth = app.add_subcommand(
      "synth", "Generate a deterministic synthetic embedding set and lexicon");
  geomlex::SynthSpec spec;
  std::string out_embeddings, out_lexicon;
  long long dim = 16, utilized = -1;
  cmd_synth->add_option("--categories", spec.num_categories, "Word types");
  cmd_synth->add_option("--exemplars", spec.exemplars_per_category,
                        "Exemplars per type");
  cmd_synth->add_option("--dim", dim, "Embedding dimensionality");
  cmd_synth->add_option("--separation", spec.separation,
                        "Centroid placement scale");
  cmd_synth->add_option("--spread", spec.within_spread,
                        "Within-category noise scale");
  cmd_synth->add_option("--utilized-dims", utilized,
                        "Coordinates carrying noise (default: all)");
  cmd_synth->add_flag("--orthogonal", spec.orthogonal_centroids,
                      "Place centroids on scaled orthonormal axes");
  cmd_synth->add_option("--seed", spec.seed, "Generator seed");
  cmd_synth->add_option("--out-embeddings", out_embeddings, "Embedding TSV path")
      ->required();
  cmd_synth->add_option("--out-lexicon", out_lexicon, "Lexicon TSV path");
  add_output(cmd_synth);
  cmd_synth->callback([&] {
    spec.dim = static_cast<Eigen::Index>(dim);
    spec.utilized_dims =
        utilized < 0 ? spec.dim : static_cast<Eigen::Index>(utilized);
    auto [set, lexicon] = geomlex::generate(spec);
    geomlex::write_embedding_set(out_embeddings, set);
    if (!out_lexicon.empty()) geomlex::write_lexicon(out_lexicon, lexicon);
    AnalysisReport report;
    report.tool = "synth";
    report.add_param("categories",
                     static_cast<std::int64_t>(spec.num_categories));
    report.add_param("exemplars",
                     static_cast<std::int64_t>(spec.exemplars_per_category));
    report.add_param("dim", static_cast<std::int64_t>(spec.dim));
    report.add_param("separation", spec.separation);
    report.add_param("spread", spec.within_spread);
    report.add_param("utilized_dims",
                     static_cast<std::int64_t>(spec.utilized_dims));
    report.add_param("orthogonal",
                     static_cast<std::int64_t>(spec.orthogonal_centroids));
    report.add_param("seed", static_cast<std::int64_t>(spec.seed));
    report.add_input("embeddings", slurp(out_embeddings));
    if (!out_lexicon.empty()) report.add_input("lexicon", slurp(out_lexicon));
    report.add_scalar("rows", static_cast<double>(set.size()));
    emit(report, output_path);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    std::cerr << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const geomlex::Error& e) {
    std::cerr << "{\"error\":{\"code\":\""
              << geomlex::detail::json_escape(e.code()) << "\",\"message\":\""
              << geomlex::detail::json_escape(e.what()) << "\"}}\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":{\"code\":\"internal\",\"message\":\""
              << geomlex::detail::json_escape(e.what()) << "\"}}\n";
    return 1;
  }
}
