#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "absa/eval.hpp"
#include "helpers.hpp"

using namespace absa;

namespace {

SentenceSpans spans(const std::string& uid, std::vector<TargetSpan> list) {
  return SentenceSpans{uid, std::move(list)};
}

}  // namespace

TEST_CASE("span_prf arithmetic on the documented cases", "[eval]") {
  std::vector<SentenceSpans> gold = {spans("s1", {{2, 2}})};
  std::vector<SentenceSpans> pred = {spans("s1", {{2, 2}, {5, 6}})};
  SpanMetrics m = span_prf(gold, pred);
  CHECK(m.tp == 1);
  CHECK(m.fp == 1);
  CHECK(m.fn == 0);
  CHECK(m.precision() == Approx(0.5));
  CHECK(m.recall() == Approx(1.0));
  CHECK(m.f1() == Approx(2.0 / 3.0).epsilon(1e-9));

  SpanMetrics identity = span_prf(pred, pred);
  CHECK(identity.precision() == 1.0);
  CHECK(identity.recall() == 1.0);
  CHECK(identity.f1() == 1.0);

  std::vector<SentenceSpans> empty_pred = {spans("s1", {})};
  SpanMetrics none = span_prf(gold, empty_pred);
  CHECK(none.precision() == 1.0);  // no predictions: vacuous precision
  CHECK(none.recall() == 0.0);
  CHECK(none.f1() == 0.0);

  std::vector<SentenceSpans> other = {spans("s2", {})};
  CHECK_THROWS_AS(span_prf(gold, other), Error);
  std::vector<SentenceSpans> fewer;
  CHECK_THROWS_AS(span_prf(gold, fewer), Error);
}

TEST_CASE("span_prf is symmetric with P and R exchanged", "[eval]") {
  testutil::Rng rng(808);
  for (int iter = 0; iter < 30; ++iter) {
    std::vector<SentenceSpans> a, b;
    for (int s = 0; s < 4; ++s) {
      std::string uid = "s" + std::to_string(s);
      std::vector<TargetSpan> sa, sb;
      for (int i = 0; i < 6; i += rng.uniform(1, 3)) {
        if (rng.chance(0.5)) sa.push_back({i, i});
        if (rng.chance(0.5)) sb.push_back({i, i});
      }
      a.push_back(spans(uid, sa));
      b.push_back(spans(uid, sb));
    }
    SpanMetrics forward = span_prf(a, b);
    SpanMetrics backward = span_prf(b, a);
    CHECK(forward.precision() == Approx(backward.recall()).margin(1e-12));
    CHECK(forward.recall() == Approx(backward.precision()).margin(1e-12));
    CHECK(forward.tp == backward.tp);
    CHECK(forward.fp == backward.fn);

    // count identities: tp+fn covers gold, tp+fp covers predictions
    long gold_total = 0, pred_total = 0;
    for (const SentenceSpans& s : a) gold_total += static_cast<long>(s.spans.size());
    for (const SentenceSpans& s : b) pred_total += static_cast<long>(s.spans.size());
    CHECK(forward.tp + forward.fn == gold_total);
    CHECK(forward.tp + forward.fp == pred_total);
  }
}

TEST_CASE("kfold balances folds deterministically", "[eval]") {
  FoldPlan plan = kfold(100, 10, 7);
  std::vector<int> sizes(10, 0);
  for (int fold : plan.assignments) sizes[static_cast<size_t>(fold)] += 1;
  for (int size : sizes) CHECK(size == 10);

  FoldPlan again = kfold(100, 10, 7);
  CHECK(plan.assignments == again.assignments);
  FoldPlan other = kfold(100, 10, 8);
  CHECK(plan.assignments != other.assignments);

  FoldPlan uneven = kfold(101, 10, 7);
  std::vector<int> sizes2(10, 0);
  for (int fold : uneven.assignments) sizes2[static_cast<size_t>(fold)] += 1;
  std::sort(sizes2.begin(), sizes2.end());
  CHECK(sizes2.front() == 10);
  CHECK(sizes2.back() == 11);

  CHECK_THROWS_AS(kfold(5, 10, 0), Error);
  CHECK_THROWS_AS(kfold(5, 1, 0), Error);
}

TEST_CASE("polarity cross-validation nails the cue corpus", "[eval]") {
  testutil::Rng rng(21);
  std::vector<PolarityExample> examples = testutil::cue_polarity_examples(rng, 150);
  PolarityCvResult cv = cross_validate_polarity(examples, {}, 10, 7);
  CHECK(cv.folds_evaluated == 10);
  CHECK(cv.warnings.empty());
  CHECK(cv.mean_accuracy >= 0.99);

  // determinism end to end
  PolarityCvResult again = cross_validate_polarity(examples, {}, 10, 7);
  CHECK(cv.mean_accuracy == again.mean_accuracy);
  for (size_t f = 0; f < cv.fold_accuracy.size(); ++f)
    CHECK(cv.fold_accuracy[f] == again.fold_accuracy[f]);
}

TEST_CASE("uninformative features score near chance", "[eval]") {
  testutil::Rng rng(1234);
  const std::vector<std::string> vocab = {
      "a", "b", "c", "d", "e", "f", "g", "h", "i", "j",
      "k", "l", "m", "n", "o", "p", "q", "r", "s", "t"};
  std::vector<PolarityExample> examples;
  for (int i = 0; i < 300; ++i) {
    PolarityExample ex;
    int len = rng.uniform(5, 8);
    for (int t = 0; t < len; ++t) ex.context_tokens.push_back(rng.pick(vocab));
    ex.target = ex.context_tokens.front();
    ex.label = kPolarityOrder[static_cast<size_t>(rng.uniform(0, 2))];
    examples.push_back(std::move(ex));
  }
  PolarityCvResult cv = cross_validate_polarity(examples, {}, 10, 99);
  CHECK(cv.mean_accuracy == Approx(1.0 / 3.0).margin(0.1));
}

TEST_CASE("folds whose training side misses a class are skipped", "[eval]") {
  testutil::Rng rng(3);
  std::vector<PolarityExample> examples = testutil::cue_polarity_examples(rng, 40);
  // keep a single Neutral example: the fold holding it trains without the
  // class and must be skipped (degenerate Z prior)
  std::vector<PolarityExample> trimmed;
  int neutrals = 0;
  for (const PolarityExample& ex : examples) {
    if (ex.label == Polarity::Neutral && neutrals++ > 0) continue;
    trimmed.push_back(ex);
  }
  PolarityCvResult cv = cross_validate_polarity(trimmed, {}, 5, 11);
  CHECK(cv.folds_evaluated == 4);
  REQUIRE(cv.warnings.size() == 1);
  CHECK(cv.warnings[0].find("skipped") != std::string::npos);
}

TEST_CASE("held-out cue injection never reaches the fold's index", "[eval]") {
  testutil::Rng rng(40);
  std::vector<PolarityExample> examples = testutil::cue_polarity_examples(rng, 60);
  FoldPlan plan = kfold(examples.size(), 5, 13);
  std::vector<PolarityExample> injected = examples;
  for (size_t i = 0; i < injected.size(); ++i)
    if (plan.assignments[i] == 0)
      injected[i].context_tokens.push_back("zorkmid");

  std::vector<PolarityExample> train;
  for (size_t i = 0; i < injected.size(); ++i)
    if (plan.assignments[i] != 0) train.push_back(injected[i]);
  PolarityFeaturizer featurizer = PolarityFeaturizer::fit(train, {});
  CHECK(featurizer.ngram_index().lookup("zorkmid") == -1);
  CHECK(featurizer.z_table().scores.count("zorkmid") == 0);

  // extraction side: the unique cue only appears in fold-0 reviews
  Corpus corpus = testutil::pos_pattern_corpus(rng, 50);
  FoldPlan review_plan = kfold(corpus.reviews.size(), 5, 13);
  std::vector<Sentence> train_sentences;
  for (size_t r = 0; r < corpus.reviews.size(); ++r) {
    for (Sentence& s : corpus.reviews[r].sentences) {
      if (review_plan.assignments[r] == 0) {
        s.text += " zorkmid";
        s.tokens = tokenize(s.text);
      } else {
        train_sentences.push_back(s);
      }
    }
  }
  IndexedDataset dataset = index_dataset(train_sentences);
  for (const std::string& name : dataset.index.names())
    CHECK(name.find("zorkmid") == std::string::npos);
}

TEST_CASE("grid search covers the default range and picks the argmax",
          "[eval]") {
  CHECK(default_z_grid().size() == 15);
  CHECK(default_z_grid().front() == -2.0);
  CHECK(default_z_grid().back() == 5.0);

  testutil::Rng rng(62);
  std::vector<PolarityExample> examples = testutil::cue_polarity_examples(rng, 60);
  std::vector<double> thresholds = {1.0, -0.5, 3.0};
  GridResult grid = grid_search_z(examples, thresholds, {}, 5, 17);
  REQUIRE(grid.accuracy_by_threshold.size() == 3);
  // reported ascending
  CHECK(grid.accuracy_by_threshold[0].first == -0.5);
  CHECK(grid.accuracy_by_threshold[2].first == 3.0);

  // the micro-run oracle: call the cross-validation once per threshold
  double best_accuracy = -1.0;
  double best_threshold = 0.0;
  for (double threshold : std::vector<double>{-0.5, 1.0, 3.0}) {
    PolarityConfig config;
    config.z.threshold = threshold;
    PolarityCvResult cv = cross_validate_polarity(examples, config, 5, 17);
    auto it = std::find_if(grid.accuracy_by_threshold.begin(),
                           grid.accuracy_by_threshold.end(),
                           [&](auto& p) { return p.first == threshold; });
    REQUIRE(it != grid.accuracy_by_threshold.end());
    CHECK(it->second == cv.mean_accuracy);
    if (cv.mean_accuracy > best_accuracy) {
      best_accuracy = cv.mean_accuracy;
      best_threshold = threshold;
    }
  }
  CHECK(grid.best_accuracy == best_accuracy);
  CHECK(grid.best_threshold == best_threshold);

  CHECK_THROWS_AS(grid_search_z(examples, {}, {}, 5, 17), Error);
}

TEST_CASE("noisy z scores stay within noise of the word-only baseline",
          "[eval]") {
  testutil::Rng rng(4321);
  // labels are random, so every z statistic is noise
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f",
                                          "g", "h", "i", "j"};
  std::vector<PolarityExample> examples;
  for (int i = 0; i < 300; ++i) {
    PolarityExample ex;
    int len = rng.uniform(4, 7);
    for (int t = 0; t < len; ++t) ex.context_tokens.push_back(rng.pick(vocab));
    ex.target = ex.context_tokens.front();
    ex.label = kPolarityOrder[static_cast<size_t>(rng.uniform(0, 2))];
    examples.push_back(std::move(ex));
  }
  PolarityConfig word_only;
  word_only.use_z = false;
  double baseline =
      cross_validate_polarity(examples, word_only, 5, 23).mean_accuracy;
  GridResult grid = grid_search_z(examples, {-1.0, 0.0, 1.0}, {}, 5, 23);
  for (const auto& [threshold, accuracy] : grid.accuracy_by_threshold)
    CHECK(accuracy == Approx(baseline).margin(0.1));
}

TEST_CASE("grid search ties break toward the smaller threshold", "[eval]") {
  testutil::Rng rng(63);
  // thresholds far above every z value: all runs identical, tie
  std::vector<PolarityExample> examples = testutil::cue_polarity_examples(rng, 45);
  GridResult grid = grid_search_z(examples, {500.0, 100.0, 900.0}, {}, 5, 19);
  CHECK(grid.accuracy_by_threshold[0].second ==
        grid.accuracy_by_threshold[2].second);
  CHECK(grid.best_threshold == 100.0);
}

TEST_CASE("target extraction cross-validation learns the POS pattern",
          "[eval]") {
  testutil::Rng rng(70);
  Corpus corpus = testutil::pos_pattern_corpus(rng, 100);
  ExtractionCvResult full =
      evaluate_target_extraction(corpus, 5, 7, FeatureTemplates::all());
  CHECK(full.micro.f1() >= 0.95);
  CHECK(full.per_fold.size() == 5);

  // micro counts pool across folds
  long tp = 0, fp = 0, fn = 0;
  for (const SpanMetrics& fold : full.per_fold) {
    tp += fold.tp;
    fp += fold.fp;
    fn += fold.fn;
  }
  CHECK(full.micro.tp == tp);
  CHECK(full.micro.fp == fp);
  CHECK(full.micro.fn == fn);

  ExtractionCvResult word_only =
      evaluate_target_extraction(corpus, 5, 7, FeatureTemplates::word_only());
  ExtractionCvResult word_pos =
      evaluate_target_extraction(corpus, 5, 7, FeatureTemplates::word_pos());
  CHECK(word_only.micro.f1() < word_pos.micro.f1());
}
