#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "absa/cli.hpp"
#include "absa/conll.hpp"
#include "absa/corpus_xml.hpp"
#include "absa/eval.hpp"
#include "absa/model_io.hpp"
#include "helpers.hpp"

using namespace absa;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "absa_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// An annotated corpus whose polarities follow cue words, written as XML.
Corpus cue_corpus(testutil::Rng& rng, int n) {
  std::vector<PolarityExample> examples = testutil::cue_polarity_examples(rng, n);
  Corpus corpus;
  corpus.reviews.push_back(Review{"r1", {}});
  for (size_t i = 0; i < examples.size(); ++i) {
    if (corpus.reviews.back().sentences.size() == 10)
      corpus.reviews.push_back(
          Review{"r" + std::to_string(corpus.reviews.size() + 1), {}});
    Opinion op;
    op.target = examples[i].context_tokens.front();
    op.occurrence = 1;
    op.category = Category::Judgment;
    op.polarity = examples[i].label;
    corpus.reviews.back().sentences.push_back(testutil::make_sentence(
        std::to_string(corpus.reviews.back().sentences.size() + 1),
        examples[i].context_tokens, {op}));
  }
  return corpus;
}

}  // namespace

TEST_CASE("tagger model file round-trips exactly", "[models]") {
  testutil::Rng rng(8);
  std::vector<Sentence> train;
  for (int i = 0; i < 12; ++i) {
    Opinion op;
    op.target = "cible";
    op.occurrence = 1;
    train.push_back(testutil::make_sentence(
        std::to_string(i + 1),
        {"le", "texte", i % 2 ? "cible" : "simple", "ici"},
        i % 2 ? std::vector<Opinion>{op} : std::vector<Opinion>{}));
  }
  IndexedDataset dataset = index_dataset(train, FeatureTemplates::word_pos());
  TaggerModel tagger;
  tagger.templates = FeatureTemplates::word_pos();
  tagger.crf = train_crf(dataset.sequences, dataset.index);

  std::string bytes = serialize_tagger_model(tagger);
  TaggerModel restored = deserialize_tagger_model(bytes);
  CHECK(restored.crf.state_weights == tagger.crf.state_weights);
  CHECK(restored.crf.transition_weights == tagger.crf.transition_weights);
  CHECK(restored.crf.feature_index.names() == tagger.crf.feature_index.names());
  CHECK(restored.templates.pos);
  CHECK_FALSE(restored.templates.shape);

  for (const Sentence& s : train) {
    std::vector<std::vector<int>> f1 =
        index_sentence(s, tagger.templates, tagger.crf.feature_index);
    std::vector<std::vector<int>> f2 =
        index_sentence(s, restored.templates, restored.crf.feature_index);
    CHECK(viterbi(tagger.crf, f1) == viterbi(restored.crf, f2));
  }
}

TEST_CASE("polarity model file round-trips predictions", "[models]") {
  testutil::Rng rng(9);
  std::vector<PolarityExample> train = testutil::cue_polarity_examples(rng, 60);
  PolarityModel model = train_polarity(train, {});
  PolarityModel restored =
      deserialize_polarity_model(serialize_polarity_model(model));
  CHECK(restored.featurizer.dim() == model.featurizer.dim());
  CHECK(restored.config.l1_c == model.config.l1_c);
  std::vector<PolarityExample> probes = testutil::cue_polarity_examples(rng, 20);
  for (const PolarityExample& ex : probes) {
    auto [l1, p1] = predict_polarity(model, ex);
    auto [l2, p2] = predict_polarity(restored, ex);
    CHECK(l1 == l2);
    for (size_t c = 0; c < 3; ++c) CHECK(p1[c] == Approx(p2[c]).margin(1e-12));
  }
}

TEST_CASE("model files validate magic, version and kind", "[models]") {
  testutil::Rng rng(10);
  std::vector<PolarityExample> train = testutil::cue_polarity_examples(rng, 30);
  PolarityModel model = train_polarity(train, {});
  std::string bytes = serialize_polarity_model(model);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_WITH(deserialize_polarity_model(bad_magic),
                    Catch::Matchers::Contains("magic"));

  std::string bad_version = bytes;
  bad_version[8] = 9;  // version field
  CHECK_THROWS_WITH(deserialize_polarity_model(bad_version),
                    Catch::Matchers::Contains("version"));

  CHECK_THROWS_WITH(deserialize_tagger_model(bytes),
                    Catch::Matchers::Contains("not a tagger model"));

  std::string truncated = bytes.substr(0, bytes.size() / 2);
  CHECK_THROWS_AS(deserialize_polarity_model(truncated), Error);
}

TEST_CASE("cli convert round-trips between xml and conll", "[cli]") {
  fs::path dir = scratch_dir();
  fs::path xml_in = dir / "sample.xml";
  fs::path conll = dir / "sample.conll";
  fs::path xml_out = dir / "sample_back.xml";
  spit(xml_in, testutil::sample_review_xml());

  REQUIRE(cli::run({"convert", "--in", xml_in.string(), "--out",
                    conll.string(), "--to", "conll"}) == 0);
  REQUIRE(cli::run({"convert", "--in", conll.string(), "--out",
                    xml_out.string(), "--to", "xml"}) == 0);
  Corpus original = parse_corpus_xml(testutil::sample_review_xml());
  Corpus returned = parse_corpus_xml(slurp(xml_out));
  CHECK(returned == original);
  CHECK(original.opinion_count() == 5);
  CHECK(original.sentence_count() == 4);
}

TEST_CASE("cli agreement on identical files reports equal commons", "[cli]") {
  fs::path dir = scratch_dir();
  fs::path a = dir / "annotator_a.xml";
  fs::path b = dir / "annotator_b.xml";
  fs::path report_path = dir / "agreement.json";
  spit(a, testutil::sample_review_xml());
  spit(b, testutil::sample_review_xml());

  REQUIRE(cli::run({"--report", report_path.string(), "agreement", a.string(),
                    b.string(), "--ids", "A1,A2"}) == 0);
  nlohmann::json report = nlohmann::json::parse(slurp(report_path));
  REQUIRE(report["annotators"].size() == 2);
  CHECK(report["annotators"][0]["targets"] == 5);
  REQUIRE(report["combinations"].size() == 1);
  CHECK(report["combinations"][0]["common_targets"] == 5);
  CHECK(report["combinations"][0]["common_categories"] == 5);
  CHECK(report["combinations"][0]["common_polarities"] == 5);
  CHECK(report["meta"]["version"] == kToolVersion);
  CHECK(report["meta"]["inputs"].size() == 2);
}

TEST_CASE("cli trains and tags the documented example sentence", "[cli]") {
  fs::path dir = scratch_dir();
  fs::path corpus_path = dir / "methode.xml";
  fs::path model_path = dir / "methode.model";
  fs::path tagged_path = dir / "methode_tagged.conll";
  fs::path xml_path = dir / "methode_tagged.xml";

  // a small corpus where "méthode" is always the target
  Corpus corpus;
  corpus.reviews.push_back(Review{"1", {}});
  Opinion op;
  op.target = "méthode";
  op.occurrence = 1;
  const std::vector<std::vector<std::string>> sentences = {
      {"Mais", "la", "méthode", "avec", "laquelle", "il", "est", "présenté",
       "comme", "seule", "hypothèse", "recevable", "pose", "problème", "."},
      {"La", "méthode", "reste", "claire", "."},
      {"Cette", "méthode", "pose", "problème", "."},
      {"Le", "texte", "reste", "clair", "."},
      {"Il", "pose", "une", "question", "."},
  };
  for (size_t i = 0; i < sentences.size(); ++i) {
    bool has_target = false;
    for (const std::string& s : sentences[i]) has_target |= s == "méthode";
    corpus.reviews[0].sentences.push_back(testutil::make_sentence(
        std::to_string(i + 1), sentences[i],
        has_target ? std::vector<Opinion>{op} : std::vector<Opinion>{}));
  }
  spit(corpus_path, write_corpus_xml(corpus));

  REQUIRE(cli::run({"train-target", "--in", corpus_path.string(), "--model",
                    model_path.string(), "--features", "word"}) == 0);
  REQUIRE(cli::run({"tag", "--model", model_path.string(), "--in",
                    corpus_path.string(), "--out", tagged_path.string(),
                    "--xml-out", xml_path.string()}) == 0);

  std::string tagged = slurp(tagged_path);
  CHECK(tagged.find("méthode\tUNK\tB") != std::string::npos);
  CHECK(tagged.find("Mais\tUNK\tO") != std::string::npos);

  Corpus predicted = parse_corpus_xml(slurp(xml_path));
  REQUIRE(predicted.reviews.size() == 1);
  const Sentence& first = predicted.reviews[0].sentences[0];
  REQUIRE(first.opinions.size() == 1);
  CHECK(first.opinions[0].target == "méthode");
  CHECK_FALSE(first.opinions[0].polarity.has_value());
  CHECK(first.opinions[0].category.value() == Category::Other);
  CHECK(first.opinions[0].category.raw().empty());
}

TEST_CASE("cli eval-target reports are byte-identical across runs", "[cli]") {
  testutil::Rng rng(71);
  fs::path dir = scratch_dir();
  // token-per-line keeps the POS column; the XML format does not carry it
  fs::path corpus_path = dir / "pattern.conll";
  fs::path report_a = dir / "eval_a.json";
  fs::path report_b = dir / "eval_b.json";
  spit(corpus_path, write_conll(testutil::pos_pattern_corpus(rng, 40)));

  std::vector<std::string> args = {"--seed", "7", "eval-target",
                                   "--in", corpus_path.string(),
                                   "--folds", "4",
                                   "--features", "word+pos"};
  std::vector<std::string> run_a = args;
  run_a.insert(run_a.begin(), {"--report", report_a.string()});
  std::vector<std::string> run_b = args;
  run_b.insert(run_b.begin(), {"--report", report_b.string()});
  REQUIRE(cli::run(run_a) == 0);
  REQUIRE(cli::run(run_b) == 0);
  CHECK(slurp(report_a) == slurp(report_b));

  nlohmann::json report = nlohmann::json::parse(slurp(report_a));
  CHECK(report["experiments"].size() == 1);
  CHECK(report["experiments"][0]["folds"].size() == 4);
  CHECK(report["meta"]["seed"] == 7);
}

TEST_CASE("cli polarity pipeline: train, classify, eval, grid", "[cli]") {
  testutil::Rng rng(72);
  fs::path dir = scratch_dir();
  fs::path corpus_path = dir / "cues.xml";
  fs::path model_path = dir / "cues.model";
  fs::path out_path = dir / "cues_classified.xml";
  fs::path tsv_path = dir / "cues_z.tsv";
  fs::path report_path = dir / "grid.json";
  Corpus corpus = cue_corpus(rng, 60);
  spit(corpus_path, write_corpus_xml(corpus));

  REQUIRE(cli::run({"train-polarity", "--in", corpus_path.string(), "--model",
                    model_path.string(), "--z-threshold", "-0.5",
                    "--z-table-out", tsv_path.string()}) == 0);
  CHECK(slurp(tsv_path).rfind("term\t", 0) == 0);

  REQUIRE(cli::run({"classify", "--model", model_path.string(), "--in",
                    corpus_path.string(), "--out", out_path.string()}) == 0);
  Corpus classified = parse_corpus_xml(slurp(out_path));
  long correct = 0, total = 0;
  for (size_t r = 0; r < corpus.reviews.size(); ++r)
    for (size_t s = 0; s < corpus.reviews[r].sentences.size(); ++s) {
      REQUIRE(classified.reviews[r].sentences[s].opinions.size() == 1);
      ++total;
      if (classified.reviews[r].sentences[s].opinions[0].polarity ==
          corpus.reviews[r].sentences[s].opinions[0].polarity)
        ++correct;
    }
  CHECK(correct == total);  // training data, fully separable

  REQUIRE(cli::run({"eval-polarity", "--in", corpus_path.string(), "--folds",
                    "5", "--no-z"}) == 0);

  REQUIRE(cli::run({"--report", report_path.string(), "grid-z", "--in",
                    corpus_path.string(), "--folds", "5", "--z-min", "-0.5",
                    "--z-max", "0.5", "--z-step", "0.5"}) == 0);
  nlohmann::json report = nlohmann::json::parse(slurp(report_path));
  CHECK(report["grid"].size() == 3);
  CHECK(report["baseline_word_only"].get<double>() >= 0.9);
  CHECK(report["best_accuracy"].get<double>() >= 0.9);
}

TEST_CASE("cli strict mode promotes skipped annotations", "[cli]") {
  fs::path dir = scratch_dir();
  fs::path corpus_path = dir / "mismatch.xml";
  fs::path model_path = dir / "mismatch.model";

  Corpus corpus;
  Opinion good;
  good.target = "texte";
  good.occurrence = 1;
  Opinion bad;
  bad.target = "absent";
  bad.occurrence = 1;
  corpus.reviews.push_back(Review{
      "1",
      {testutil::make_sentence("1", {"un", "texte", "simple"}, {good, bad}),
       testutil::make_sentence("2", {"un", "autre", "texte"}, {})}});
  spit(corpus_path, write_corpus_xml(corpus));

  REQUIRE(cli::run({"train-target", "--in", corpus_path.string(), "--model",
                    model_path.string(), "--features", "word"}) == 0);
  REQUIRE(cli::run({"--strict", "train-target", "--in", corpus_path.string(),
                    "--model", model_path.string(), "--features", "word"}) == 2);
}

TEST_CASE("cli surfaces errors with nonzero exit codes", "[cli]") {
  fs::path dir = scratch_dir();
  CHECK(cli::run({"convert", "--in", (dir / "missing.xml").string(), "--out",
                  (dir / "x").string()}) == 1);
  CHECK(cli::run({"bogus-subcommand"}) != 0);
  // model/kind mismatch: feeding a polarity command a tagger model
  fs::path corpus_path = dir / "kind.xml";
  fs::path tagger_path = dir / "kind.model";
  spit(corpus_path, testutil::sample_review_xml());
  REQUIRE(cli::run({"train-target", "--in", corpus_path.string(), "--model",
                    tagger_path.string(), "--features", "word"}) == 0);
  CHECK(cli::run({"classify", "--model", tagger_path.string(), "--in",
                  corpus_path.string(), "--out",
                  (dir / "kind_out.xml").string()}) == 1);
}

TEST_CASE("cli config file supplies defaults", "[cli]") {
  fs::path dir = scratch_dir();
  fs::path corpus_path = dir / "config_corpus.xml";
  fs::path config_path = dir / "absa.ini";
  fs::path report_path = dir / "config_eval.json";
  testutil::Rng rng(73);
  spit(corpus_path, write_corpus_xml(cue_corpus(rng, 45)));
  spit(config_path, "[eval-polarity]\nfolds=5\nno-z=true\n");

  REQUIRE(cli::run({"--config", config_path.string(), "--report",
                    report_path.string(), "eval-polarity", "--in",
                    corpus_path.string()}) == 0);
  nlohmann::json report = nlohmann::json::parse(slurp(report_path));
  CHECK(report["meta"]["config"]["folds"] == 5);
  CHECK(report["meta"]["config"]["use_z"] == false);
}
