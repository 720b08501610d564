// Copyright 2026 The Absa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Subcommands: convert, agreement, train-target,
// tag, eval-target, train-polarity, classify, eval-polarity, grid-z.
// Reports are JSON with a stable key order and embed the tool version,
// the config echo, input-file content hashes and the seed, so two runs
// with identical inputs are byte-identical.

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "absa/agreement.hpp"
#include "absa/conll.hpp"
#include "absa/corpus.hpp"
#include "absa/corpus_xml.hpp"
#include "absa/eval.hpp"
#include "absa/model_io.hpp"

namespace absa {

inline constexpr const char* kToolVersion = "0.1.0";

namespace cli {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open \"" + path + "\" for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open \"" + path + "\" for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing \"" + path + "\"");
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

inline bool looks_like_xml(std::string_view bytes) {
  for (char c : bytes) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    return c == '<';
  }
  return false;
}

inline Corpus load_corpus(const std::string& path) {
  std::string bytes = read_file(path);
  return looks_like_xml(bytes) ? parse_corpus_xml(bytes) : read_conll(bytes);
}

inline std::vector<Sentence> all_sentences(const Corpus& corpus) {
  std::vector<Sentence> sentences;
  for (const Review& review : corpus.reviews)
    for (const Sentence& sentence : review.sentences)
      if (!sentence.tokens.empty()) sentences.push_back(sentence);
  return sentences;
}

inline bool corpus_has_pos(const Corpus& corpus) {
  for (const Review& review : corpus.reviews)
    for (const Sentence& sentence : review.sentences)
      for (const Token& token : sentence.tokens)
        if (token.pos != "UNK") return true;
  return false;
}

inline void check_pos_available(const Corpus& corpus,
                                const FeatureTemplates& templates,
                                const std::string& pos_mode) {
  if (!templates.pos || pos_mode == "fallback-unk") return;
  if (!corpus_has_pos(corpus))
    throw Error(
        "the corpus carries no POS tags but the feature set uses them; "
        "supply tagged input or pass --pos fallback-unk");
}

inline std::string format_number(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

inline std::string threshold_label(double threshold) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%+g", threshold);
  return buffer;
}

struct CommandContext {
  uint64_t seed = 7;
  bool strict = false;
  std::string report_path;
  std::vector<std::string> warnings;
  int exit_code = 0;

  Json meta(const std::string& command,
            const std::vector<std::string>& input_paths, Json config) const {
    Json inputs = Json::array();
    for (const std::string& path : input_paths)
      inputs.push_back({{"path", path}, {"fnv1a64", fnv1a64_hex(read_file(path))}});
    Json meta;
    meta["tool"] = "absa";
    meta["version"] = kToolVersion;
    meta["command"] = command;
    meta["seed"] = seed;
    meta["strict"] = strict;
    meta["inputs"] = inputs;
    meta["config"] = std::move(config);
    return meta;
  }

  void emit_report(Json report) const {
    if (report_path.empty()) return;
    write_file(report_path, report.dump(2) + "\n");
  }

  void finish() {
    for (const std::string& warning : warnings)
      std::cerr << "warning: " << warning << "\n";
    if (strict && !warnings.empty() && exit_code == 0) exit_code = 2;
  }
};

// IOB-tagged token-per-line rendering used by `tag`.
inline std::string write_tagged_conll(
    const Corpus& corpus,
    const std::vector<std::vector<IobTag>>& tags_per_sentence) {
  std::string out;
  size_t cursor = 0;
  for (const Review& review : corpus.reviews) {
    out += "#review " + review.id + "\n";
    for (const Sentence& sentence : review.sentences) {
      out += "#sentence " + sentence.id + "\n";
      out += "#text " + sentence.text + "\n";
      for (const Opinion& op : sentence.opinions)
        out += "#opinion " + op.target + "\t\t-\tNULL\t" +
               std::to_string(op.occurrence) + "\n";
      const std::vector<IobTag>& tags = tags_per_sentence.at(cursor++);
      for (size_t t = 0; t < sentence.tokens.size(); ++t) {
        out += sentence.tokens[t].surface;
        out += '\t';
        out += sentence.tokens[t].pos;
        out += '\t';
        out += iob_to_char(tags[t]);
        out += '\n';
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------
// subcommand bodies

struct ConvertArgs {
  std::string input, output, to = "conll", features = "all";
};

inline void cmd_convert(detail::CommandContext& ctx, const ConvertArgs& args) {
  Corpus corpus = detail::load_corpus(args.input);
  if (args.to == "xml") {
    detail::write_file(args.output, write_corpus_xml(corpus));
  } else if (args.to == "conll") {
    detail::write_file(args.output, write_conll(corpus));
  } else if (args.to == "features") {
    FeatureTemplates templates = FeatureTemplates::from_name(args.features);
    std::ostringstream out;
    std::vector<Sentence> sentences = detail::all_sentences(corpus);
    for (const Sentence& sentence : sentences) {
      IobResult iob = to_iob(sentence);
      ctx.warnings.insert(ctx.warnings.end(), iob.warnings.begin(),
                          iob.warnings.end());
    }
    dump_features(out, sentences, templates);
    detail::write_file(args.output, out.str());
  } else {
    throw Error("unknown conversion target \"" + args.to +
                "\" (expected xml, conll or features)");
  }
  std::cout << "converted " << corpus.reviews.size() << " review(s), "
            << corpus.sentence_count() << " sentence(s), "
            << corpus.opinion_count() << " opinion(s) to " << args.to << "\n";
  Json config = {{"to", args.to}, {"features", args.features}};
  Json report;
  report["meta"] = ctx.meta("convert", {args.input}, config);
  report["reviews"] = corpus.reviews.size();
  report["sentences"] = corpus.sentence_count();
  report["opinions"] = corpus.opinion_count();
  report["warnings"] = ctx.warnings;
  ctx.emit_report(report);
}

struct AgreementArgs {
  std::vector<std::string> files;
  std::vector<std::string> ids;
};

inline void cmd_agreement(detail::CommandContext& ctx, const AgreementArgs& args) {
  if (!args.ids.empty() && args.ids.size() != args.files.size())
    throw Error("--ids must list one id per file");
  std::vector<std::pair<std::string, Corpus>> corpora;
  for (size_t i = 0; i < args.files.size(); ++i) {
    Corpus corpus = detail::load_corpus(args.files[i]);
    std::string id;
    if (!args.ids.empty()) id = args.ids[i];
    else if (corpus.annotator_id) id = *corpus.annotator_id;
    else id = "A" + std::to_string(i + 1);
    corpora.emplace_back(std::move(id), std::move(corpus));
  }
  AgreementReport report = agreement_stats(corpora);

  std::printf("%-24s %10s %12s %12s\n", "annotator", "targets", "categories",
              "polarities");
  for (const AnnotatorCounts& row : report.per_annotator)
    std::printf("%-24s %10ld %12ld %12ld\n", row.annotator.c_str(), row.targets,
                row.categories, row.polarities);
  for (const SubsetCounts& row : report.subsets) {
    std::string label;
    for (size_t i = 0; i < row.annotators.size(); ++i) {
      if (i) label += "+";
      label += row.annotators[i];
    }
    std::printf("%-24s %10ld %12ld %12ld\n", label.c_str(), row.common_targets,
                row.common_categories, row.common_polarities);
  }

  Json json;
  json["meta"] = ctx.meta("agreement", args.files,
                          Json{{"ids", args.ids}});
  Json annotators = Json::array();
  for (const AnnotatorCounts& row : report.per_annotator)
    annotators.push_back({{"annotator", row.annotator},
                          {"targets", row.targets},
                          {"categories", row.categories},
                          {"polarities", row.polarities}});
  json["annotators"] = annotators;
  Json combinations = Json::array();
  for (const SubsetCounts& row : report.subsets)
    combinations.push_back({{"annotators", row.annotators},
                            {"common_targets", row.common_targets},
                            {"common_categories", row.common_categories},
                            {"common_polarities", row.common_polarities}});
  json["combinations"] = combinations;
  json["warnings"] = ctx.warnings;
  ctx.emit_report(json);
}

struct TrainTargetArgs {
  std::string input, model_path;
  std::string features = "all";
  std::string pos_mode = "input";
  std::string dump_path;
  TrainConfig config;
};

inline void cmd_train_target(detail::CommandContext& ctx,
                             const TrainTargetArgs& args) {
  Corpus corpus = detail::load_corpus(args.input);
  FeatureTemplates templates = FeatureTemplates::from_name(args.features);
  detail::check_pos_available(corpus, templates, args.pos_mode);
  std::vector<Sentence> sentences = detail::all_sentences(corpus);
  IndexedDataset dataset = index_dataset(sentences, templates);
  ctx.warnings.insert(ctx.warnings.end(), dataset.warnings.begin(),
                      dataset.warnings.end());

  TrainLog log;
  TaggerModel tagger;
  tagger.templates = templates;
  tagger.crf = train_crf(dataset.sequences, std::move(dataset.index),
                         args.config, &log);
  detail::write_file(args.model_path, serialize_tagger_model(tagger));
  if (!args.dump_path.empty()) {
    std::ostringstream out;
    dump_features(out, sentences, templates);
    detail::write_file(args.dump_path, out.str());
  }

  std::cout << "trained tagger on " << dataset.sequences.size()
            << " sentence(s), " << tagger.crf.num_features()
            << " feature(s); " << log.iterations << " iteration(s), "
            << (log.converged ? "converged" : "iteration limit reached")
            << ", objective "
            << detail::format_number(log.objective.back(), 6) << "\n";

  Json config = {{"features", args.features},
                 {"l2_sigma", args.config.l2_sigma},
                 {"max_iterations", args.config.max_iterations},
                 {"gradient_tolerance", args.config.gradient_tolerance},
                 {"pos_mode", args.pos_mode}};
  Json report;
  report["meta"] = ctx.meta("train-target", {args.input}, config);
  report["sentences"] = dataset.sequences.size();
  report["num_features"] = tagger.crf.num_features();
  report["iterations"] = log.iterations;
  report["converged"] = log.converged;
  report["objective_curve"] = log.objective;
  report["warnings"] = ctx.warnings;
  ctx.emit_report(report);
}

struct TagArgs {
  std::string model_path, input, output, xml_output;
  std::string pos_mode = "input";
};

inline void cmd_tag(detail::CommandContext& ctx, const TagArgs& args) {
  if (args.output.empty() && args.xml_output.empty())
    throw Error("tag: need --out and/or --xml-out");
  TaggerModel tagger = deserialize_tagger_model(detail::read_file(args.model_path));
  Corpus corpus = detail::load_corpus(args.input);
  detail::check_pos_available(corpus, tagger.templates, args.pos_mode);

  std::vector<std::vector<IobTag>> tags_per_sentence;
  size_t predicted_spans = 0;
  for (Review& review : corpus.reviews) {
    for (Sentence& sentence : review.sentences) {
      std::vector<std::vector<int>> features = index_sentence(
          sentence, tagger.templates, tagger.crf.feature_index);
      std::vector<IobTag> tags = viterbi(tagger.crf, features);
      std::vector<Opinion> predictions;
      for (const TargetSpan& span : from_iob(tags)) {
        Opinion op;
        std::vector<Token> span_tokens(
            sentence.tokens.begin() + span.start,
            sentence.tokens.begin() + span.end + 1);
        for (size_t i = 0; i < span_tokens.size(); ++i) {
          if (i) op.target += ' ';
          op.target += span_tokens[i].surface;
        }
        std::vector<int> starts = target_match_starts(sentence.tokens, span_tokens);
        op.occurrence = 1;
        for (size_t i = 0; i < starts.size(); ++i)
          if (starts[i] == span.start) op.occurrence = static_cast<int>(i) + 1;
        op.category = Category::other("");  // no category prediction
        predictions.push_back(std::move(op));
        ++predicted_spans;
      }
      sentence.opinions = std::move(predictions);
      tags_per_sentence.push_back(std::move(tags));
    }
  }
  if (!args.output.empty())
    detail::write_file(args.output,
                       detail::write_tagged_conll(corpus, tags_per_sentence));
  if (!args.xml_output.empty())
    detail::write_file(args.xml_output, write_corpus_xml(corpus));

  std::cout << "tagged " << corpus.sentence_count() << " sentence(s), "
            << predicted_spans << " predicted target(s)\n";
  Json report;
  report["meta"] = ctx.meta("tag", {args.model_path, args.input},
                            Json{{"pos_mode", args.pos_mode}});
  report["sentences"] = corpus.sentence_count();
  report["predicted_targets"] = predicted_spans;
  report["warnings"] = ctx.warnings;
  ctx.emit_report(report);
}

struct EvalTargetArgs {
  std::string input;
  std::string features = "all";  // comma-separated list of template sets
  int folds = 10;
  std::string pos_mode = "input";
  TrainConfig config;
};

inline void cmd_eval_target(detail::CommandContext& ctx,
                            const EvalTargetArgs& args) {
  Corpus corpus = detail::load_corpus(args.input);
  std::vector<std::string> sets;
  {
    std::stringstream in(args.features);
    std::string item;
    while (std::getline(in, item, ',')) sets.push_back(trim(item));
  }
  if (sets.empty()) throw Error("eval-target: no feature sets given");

  Json experiments = Json::array();
  std::printf("%-28s %8s %10s %9s\n", "experiment", "recall", "precision",
              "f1-score");
  for (const std::string& set_name : sets) {
    FeatureTemplates templates = FeatureTemplates::from_name(set_name);
    detail::check_pos_available(corpus, templates, args.pos_mode);
    ExtractionCvResult result = evaluate_target_extraction(
        corpus, args.folds, ctx.seed, templates, args.config);
    ctx.warnings.insert(ctx.warnings.end(), result.warnings.begin(),
                        result.warnings.end());
    std::printf("%-28s %8s %10s %9s\n", set_name.c_str(),
                detail::format_number(result.micro.recall(), 4).c_str(),
                detail::format_number(result.micro.precision(), 4).c_str(),
                detail::format_number(result.micro.f1(), 4).c_str());
    Json folds = Json::array();
    for (const SpanMetrics& fold : result.per_fold)
      folds.push_back({{"tp", fold.tp},
                       {"fp", fold.fp},
                       {"fn", fold.fn},
                       {"recall", fold.recall()},
                       {"precision", fold.precision()},
                       {"f1", fold.f1()}});
    experiments.push_back({{"features", set_name},
                           {"micro",
                            {{"tp", result.micro.tp},
                             {"fp", result.micro.fp},
                             {"fn", result.micro.fn},
                             {"recall", result.micro.recall()},
                             {"precision", result.micro.precision()},
                             {"f1", result.micro.f1()}}},
                           {"folds", folds}});
  }

  Json config = {{"features", args.features},
                 {"folds", args.folds},
                 {"l2_sigma", args.config.l2_sigma},
                 {"max_iterations", args.config.max_iterations},
                 {"gradient_tolerance", args.config.gradient_tolerance}};
  Json report;
  report["meta"] = ctx.meta("eval-target", {args.input}, config);
  report["experiments"] = experiments;
  report["warnings"] = ctx.warnings;
  ctx.emit_report(report);
}

struct TrainPolarityArgs {
  std::string input, model_path, z_table_path;
  PolarityConfig config;
};

inline void cmd_train_polarity(detail::CommandContext& ctx,
                               const TrainPolarityArgs& args) {
  Corpus corpus = detail::load_corpus(args.input);
  std::vector<PolarityExample> examples = polarity_examples(corpus);
  PolarityModel model = train_polarity(examples, args.config);
  detail::write_file(args.model_path, serialize_polarity_model(model));
  if (!args.z_table_path.empty()) {
    if (!args.config.use_z)
      throw Error("--z-table-out requires z features (drop --no-z)");
    detail::write_file(args.z_table_path,
                       z_table_tsv(model.featurizer.z_table()));
  }
  size_t nonzero = 0, total = 0;
  for (const auto& weights : model.class_weights) {
    total += weights.size();
    for (double w : weights)
      if (w != 0.0) ++nonzero;
  }
  std::cout << "trained polarity classifier on " << examples.size()
            << " example(s); " << model.featurizer.dim()
            << " feature(s), " << nonzero << "/" << total
            << " nonzero weight(s)\n";

  Json config = {{"use_z", args.config.use_z},
                 {"z_threshold", args.config.z.threshold},
                 {"min_ngram_count", args.config.min_ngram_count},
                 {"l1_c", args.config.l1_c}};
  Json report;
  report["meta"] = ctx.meta("train-polarity", {args.input}, config);
  report["examples"] = examples.size();
  report["features"] = model.featurizer.dim();
  report["nonzero_weights"] = nonzero;
  report["warnings"] = ctx.warnings;
  ctx.emit_report(report);
}

struct ClassifyArgs {
  std::string model_path, input, output;
};

inline void cmd_classify(detail::CommandContext& ctx, const ClassifyArgs& args) {
  PolarityModel model =
      deserialize_polarity_model(detail::read_file(args.model_path));
  Corpus corpus = detail::load_corpus(args.input);
  std::array<long, 3> predicted{};
  for (Review& review : corpus.reviews) {
    for (Sentence& sentence : review.sentences) {
      if (sentence.opinions.empty()) continue;
      PolarityExample ex;
      for (const Token& t : sentence.tokens)
        ex.context_tokens.push_back(to_lower(t.surface));
      for (Opinion& op : sentence.opinions) {
        ex.target = op.target;
        auto [label, probabilities] = predict_polarity(model, ex);
        op.polarity = label;
        predicted[static_cast<size_t>(polarity_class(label))] += 1;
      }
    }
  }
  bool as_xml = args.output.size() >= 4 &&
                args.output.substr(args.output.size() - 4) == ".xml";
  detail::write_file(args.output,
                     as_xml ? write_corpus_xml(corpus) : write_conll(corpus));
  std::cout << "classified " << (predicted[0] + predicted[1] + predicted[2])
            << " opinion(s): " << predicted[0] << " positive, " << predicted[1]
            << " negative, " << predicted[2] << " neutral\n";
  Json report;
  report["meta"] = ctx.meta("classify", {args.model_path, args.input}, Json::object());
  report["positive"] = predicted[0];
  report["negative"] = predicted[1];
  report["neutral"] = predicted[2];
  report["warnings"] = ctx.warnings;
  ctx.emit_report(report);
}

struct EvalPolarityArgs {
  std::string input;
  int folds = 10;
  PolarityConfig config;
};

inline Json fold_accuracy_json(const PolarityCvResult& cv) {
  Json folds = Json::array();
  for (const std::optional<double>& accuracy : cv.fold_accuracy) {
    if (accuracy) folds.push_back(*accuracy);
    else folds.push_back(nullptr);
  }
  return folds;
}

inline void cmd_eval_polarity(detail::CommandContext& ctx,
                              const EvalPolarityArgs& args) {
  Corpus corpus = detail::load_corpus(args.input);
  std::vector<PolarityExample> examples = polarity_examples(corpus);
  PolarityCvResult cv =
      cross_validate_polarity(examples, args.config, args.folds, ctx.seed);
  ctx.warnings.insert(ctx.warnings.end(), cv.warnings.begin(), cv.warnings.end());
  std::cout << "accuracy " << detail::format_number(cv.mean_accuracy * 100, 2)
            << " over " << cv.folds_evaluated << "/" << args.folds
            << " fold(s), " << examples.size() << " example(s)\n";
  Json config = {{"use_z", args.config.use_z},
                 {"z_threshold", args.config.z.threshold},
                 {"min_ngram_count", args.config.min_ngram_count},
                 {"l1_c", args.config.l1_c},
                 {"folds", args.folds}};
  Json report;
  report["meta"] = ctx.meta("eval-polarity", {args.input}, config);
  report["examples"] = examples.size();
  report["mean_accuracy"] = cv.mean_accuracy;
  report["fold_accuracy"] = fold_accuracy_json(cv);
  report["folds_evaluated"] = cv.folds_evaluated;
  report["warnings"] = ctx.warnings;
  ctx.emit_report(report);
}

struct GridZArgs {
  std::string input;
  int folds = 10;
  double z_min = -2.0, z_max = 5.0, z_step = 0.5;
  PolarityConfig config;
};

inline void cmd_grid_z(detail::CommandContext& ctx, const GridZArgs& args) {
  Corpus corpus = detail::load_corpus(args.input);
  std::vector<PolarityExample> examples = polarity_examples(corpus);
  if (args.z_step <= 0) throw Error("grid-z: --z-step must be positive");
  std::vector<double> thresholds;
  for (double t = args.z_min; t <= args.z_max + 1e-9; t += args.z_step)
    thresholds.push_back(t);

  PolarityConfig word_only = args.config;
  word_only.use_z = false;
  PolarityCvResult baseline =
      cross_validate_polarity(examples, word_only, args.folds, ctx.seed);
  GridResult grid =
      grid_search_z(examples, thresholds, args.config, args.folds, ctx.seed);
  ctx.warnings.insert(ctx.warnings.end(), grid.warnings.begin(),
                      grid.warnings.end());

  std::printf("%-16s %8s\n", "experiment", "accuracy");
  std::printf("%-16s %8s\n", "word",
              detail::format_number(baseline.mean_accuracy * 100, 2).c_str());
  for (const auto& [threshold, accuracy] : grid.accuracy_by_threshold) {
    std::string label = "word+Z" + detail::threshold_label(threshold);
    std::printf("%-16s %8s\n", label.c_str(),
                detail::format_number(accuracy * 100, 2).c_str());
  }
  std::printf("best: word+Z%s (%s)\n",
              detail::threshold_label(grid.best_threshold).c_str(),
              detail::format_number(grid.best_accuracy * 100, 2).c_str());

  Json config = {{"folds", args.folds},
                 {"z_min", args.z_min},
                 {"z_max", args.z_max},
                 {"z_step", args.z_step},
                 {"min_ngram_count", args.config.min_ngram_count},
                 {"l1_c", args.config.l1_c}};
  Json curve = Json::array();
  for (const auto& [threshold, accuracy] : grid.accuracy_by_threshold)
    curve.push_back({{"threshold", threshold}, {"accuracy", accuracy}});
  Json report;
  report["meta"] = ctx.meta("grid-z", {args.input}, config);
  report["examples"] = examples.size();
  report["baseline_word_only"] = baseline.mean_accuracy;
  report["grid"] = curve;
  report["best_threshold"] = grid.best_threshold;
  report["best_accuracy"] = grid.best_accuracy;
  report["warnings"] = ctx.warnings;
  ctx.emit_report(report);
}

// ---------------------------------------------------------------------

inline int run(const std::vector<std::string>& arguments) {
  CLI::App app{"opinion target extraction and polarity analysis for book reviews"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "key-value config file");
  app.require_subcommand(1);

  detail::CommandContext ctx;
  app.add_option("--seed", ctx.seed, "seed recorded in reports")
      ->capture_default_str();
  app.add_flag("--strict", ctx.strict,
               "exit nonzero when annotations were skipped");
  app.add_option("--report", ctx.report_path, "write a JSON report here");

  ConvertArgs convert_args;
  CLI::App* convert = app.add_subcommand("convert", "convert between formats");
  convert->fallthrough();
  convert->add_option("--in", convert_args.input, "input corpus")->required();
  convert->add_option("--out", convert_args.output, "output path")->required();
  convert->add_option("--to", convert_args.to, "xml | conll | features")
      ->capture_default_str();
  convert->add_option("--features", convert_args.features,
                      "template set for --to features")
      ->capture_default_str();

  AgreementArgs agreement_args;
  std::string agreement_ids;
  CLI::App* agreement = app.add_subcommand("agreement",
                                           "inter-annotator agreement counts");
  agreement->fallthrough();
  agreement->add_option("files", agreement_args.files, "annotated corpora")
      ->required()
      ->expected(-1);
  agreement->add_option("--ids", agreement_ids,
                        "comma-separated annotator ids, one per file");

  TrainTargetArgs train_target_args;
  CLI::App* train_target =
      app.add_subcommand("train-target", "train the target tagger");
  train_target->fallthrough();
  train_target->add_option("--in", train_target_args.input, "training corpus")
      ->required();
  train_target->add_option("--model", train_target_args.model_path,
                           "model file to write")
      ->required();
  train_target->add_option("--features", train_target_args.features,
                           "word | word+pos | word+pos+type+shape | all")
      ->capture_default_str();
  train_target->add_option("--sigma", train_target_args.config.l2_sigma,
                           "L2 sigma")
      ->capture_default_str();
  train_target->add_option("--max-iter", train_target_args.config.max_iterations,
                           "iteration cap")
      ->capture_default_str();
  train_target->add_option("--tol", train_target_args.config.gradient_tolerance,
                           "gradient tolerance")
      ->capture_default_str();
  train_target->add_option("--pos", train_target_args.pos_mode,
                           "input | fallback-unk")
      ->capture_default_str();
  train_target->add_option("--dump-features", train_target_args.dump_path,
                           "write the feature dump here");

  TagArgs tag_args;
  CLI::App* tag = app.add_subcommand("tag", "tag a corpus with a trained model");
  tag->fallthrough();
  tag->add_option("--model", tag_args.model_path, "tagger model")->required();
  tag->add_option("--in", tag_args.input, "corpus to tag")->required();
  tag->add_option("--out", tag_args.output, "tagged token-per-line output");
  tag->add_option("--xml-out", tag_args.xml_output,
                  "XML with predicted opinions");
  tag->add_option("--pos", tag_args.pos_mode, "input | fallback-unk")
      ->capture_default_str();

  EvalTargetArgs eval_target_args;
  CLI::App* eval_target = app.add_subcommand(
      "eval-target", "cross-validate the target tagger");
  eval_target->fallthrough();
  eval_target->add_option("--in", eval_target_args.input, "annotated corpus")
      ->required();
  eval_target->add_option("--features", eval_target_args.features,
                          "comma-separated template sets")
      ->capture_default_str();
  eval_target->add_option("--folds", eval_target_args.folds, "fold count")
      ->capture_default_str();
  eval_target->add_option("--sigma", eval_target_args.config.l2_sigma, "L2 sigma")
      ->capture_default_str();
  eval_target->add_option("--max-iter",
                          eval_target_args.config.max_iterations,
                          "iteration cap")
      ->capture_default_str();
  eval_target->add_option("--tol",
                          eval_target_args.config.gradient_tolerance,
                          "gradient tolerance")
      ->capture_default_str();
  eval_target->add_option("--pos", eval_target_args.pos_mode,
                          "input | fallback-unk")
      ->capture_default_str();

  TrainPolarityArgs train_polarity_args;
  bool train_no_z = false;
  CLI::App* train_polarity_cmd =
      app.add_subcommand("train-polarity", "train the polarity classifier");
  train_polarity_cmd->fallthrough();
  train_polarity_cmd
      ->add_option("--in", train_polarity_args.input, "annotated corpus")
      ->required();
  train_polarity_cmd
      ->add_option("--model", train_polarity_args.model_path,
                   "model file to write")
      ->required();
  train_polarity_cmd
      ->add_option("--z-threshold", train_polarity_args.config.z.threshold,
                   "Z-score threshold")
      ->capture_default_str();
  train_polarity_cmd->add_flag("--no-z", train_no_z, "word n-grams only");
  train_polarity_cmd
      ->add_option("--l1-c", train_polarity_args.config.l1_c,
                   "inverse L1 strength")
      ->capture_default_str();
  train_polarity_cmd
      ->add_option("--min-count", train_polarity_args.config.min_ngram_count,
                   "n-gram occurrence cutoff")
      ->capture_default_str();
  train_polarity_cmd->add_option("--z-table-out",
                                 train_polarity_args.z_table_path,
                                 "write the Z table as TSV");

  ClassifyArgs classify_args;
  CLI::App* classify =
      app.add_subcommand("classify", "assign polarities with a trained model");
  classify->fallthrough();
  classify->add_option("--model", classify_args.model_path, "polarity model")
      ->required();
  classify->add_option("--in", classify_args.input, "corpus with targets")
      ->required();
  classify->add_option("--out", classify_args.output,
                       "output corpus (.xml for XML, otherwise token-per-line)")
      ->required();

  EvalPolarityArgs eval_polarity_args;
  bool eval_no_z = false;
  CLI::App* eval_polarity = app.add_subcommand(
      "eval-polarity", "cross-validate the polarity classifier");
  eval_polarity->fallthrough();
  eval_polarity->add_option("--in", eval_polarity_args.input, "annotated corpus")
      ->required();
  eval_polarity->add_option("--folds", eval_polarity_args.folds, "fold count")
      ->capture_default_str();
  eval_polarity
      ->add_option("--z-threshold", eval_polarity_args.config.z.threshold,
                   "Z-score threshold")
      ->capture_default_str();
  eval_polarity->add_flag("--no-z", eval_no_z, "word n-grams only");
  eval_polarity
      ->add_option("--l1-c", eval_polarity_args.config.l1_c,
                   "inverse L1 strength")
      ->capture_default_str();
  eval_polarity
      ->add_option("--min-count", eval_polarity_args.config.min_ngram_count,
                   "n-gram occurrence cutoff")
      ->capture_default_str();

  GridZArgs grid_args;
  CLI::App* grid = app.add_subcommand(
      "grid-z", "accuracy curve over a Z-threshold grid");
  grid->fallthrough();
  grid->add_option("--in", grid_args.input, "annotated corpus")->required();
  grid->add_option("--folds", grid_args.folds, "fold count")
      ->capture_default_str();
  grid->add_option("--z-min", grid_args.z_min, "grid start")
      ->capture_default_str();
  grid->add_option("--z-max", grid_args.z_max, "grid end")
      ->capture_default_str();
  grid->add_option("--z-step", grid_args.z_step, "grid step")
      ->capture_default_str();
  grid->add_option("--l1-c", grid_args.config.l1_c, "inverse L1 strength")
      ->capture_default_str();
  grid->add_option("--min-count", grid_args.config.min_ngram_count,
                   "n-gram occurrence cutoff")
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back("absa");
  for (const std::string& arg : arguments) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "absa: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "absa: " << e.what() << "\n";
    return 1;
  }

  try {
    if (convert->parsed()) cmd_convert(ctx, convert_args);
    if (agreement->parsed()) {
      if (!agreement_ids.empty()) {
        std::stringstream in(agreement_ids);
        std::string id;
        while (std::getline(in, id, ',')) agreement_args.ids.push_back(trim(id));
      }
      cmd_agreement(ctx, agreement_args);
    }
    if (train_target->parsed()) cmd_train_target(ctx, train_target_args);
    if (tag->parsed()) cmd_tag(ctx, tag_args);
    if (eval_target->parsed()) cmd_eval_target(ctx, eval_target_args);
    if (train_polarity_cmd->parsed()) {
      train_polarity_args.config.use_z = !train_no_z;
      cmd_train_polarity(ctx, train_polarity_args);
    }
    if (classify->parsed()) cmd_classify(ctx, classify_args);
    if (eval_polarity->parsed()) {
      eval_polarity_args.config.use_z = !eval_no_z;
      cmd_eval_polarity(ctx, eval_polarity_args);
    }
    if (grid->parsed()) cmd_grid_z(ctx, grid_args);
  } catch (const Error& e) {
    std::cerr << "absa: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "absa: " << e.what() << "\n";
    return 1;
  }
  ctx.finish();
  return ctx.exit_code;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> arguments;
  for (int i = 1; i < argc; ++i) arguments.emplace_back(argv[i]);
  return run(arguments);
}

}  // namespace cli
}  // namespace absa
