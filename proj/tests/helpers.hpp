// Shared fixtures and generators for the test suites.
#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "absa/corpus.hpp"
#include "absa/polarity.hpp"

namespace testutil {

// A hand-annotated review in the corpus XML format, used as the canonical
// parsing fixture. The leading space in target=" livre" is deliberate:
// attribute values arrive untrimmed from annotation tools.
inline const char* sample_review_xml() {
  return R"(<review>
  <sentences>
    <sentence id="1">
      <text>
        Ce livre , version pour la publication d' un mémoire de DEA qui a reçu le prix Simone Genevois en 2002 , est consacré à un sujet original et_encore peu traité : le travail des conseillers historiques sur les films français des années 1970 et 1980 .
      </text>
      <Opinions>
        <Opinion target=" livre" category="presentation" polarity="positive" polarityterms="original ; peu traite" occurrence="1"/>
      </Opinions>
    </sentence>
    <sentence id="2">
      <text>Une dizaine de films sont envisagés dans cette étude .</text>
      <Opinions>
        <Opinion target="films" category="presentation" polarity="neutre" polarityterms="NULL" occurrence="1"/>
      </Opinions>
    </sentence>
    <sentence id="3">
      <text>Ce sont tous des films " historiques " français .</text>
      <Opinions>
        <Opinion target="films" category="presentation" polarity="neutre" polarityterms="NULL" occurrence="1"/>
      </Opinions>
    </sentence>
    <sentence id="4">
      <text>L' ensemble reste malgré tout un_peu hétéroclite puisque les deux films de René Allio considérés ( les Camisards et Moi , Pierre Rivière… ) ont été réalisés sans recours à ce genre de spécialiste , mais l' auteur s' en justifie par l' argument que les scénarios sont tirés d' ouvrages d' historiens renommés .</text>
      <Opinions>
        <Opinion target="ensemble" category="presentation" polarity="negative" polarityterms="heteroclite" occurrence="1"/>
        <Opinion target="historiens" category="methodology" polarity="positive" polarityterms="renommes" occurrence="1"/>
      </Opinions>
    </sentence>
  </sentences>
</review>
)";
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  int uniform(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<uint64_t>(hi - lo + 1));
  }
  double real() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double real(double lo, double hi) { return lo + (hi - lo) * real(); }
  bool chance(double p) { return real() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<size_t>(uniform(0, static_cast<int>(items.size()) - 1))];
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline const std::vector<std::string>& french_vocab() {
  static const std::vector<std::string> kVocab = {
      "le",     "livre",   "méthode", "auteur",  "chapitre", "étude",
      "texte",  "analyse", "original", "clair",  "confus",   "remarquable",
      "faible", "propose", "présente", "examine", "ouvrage", "lecteur",
      "très",   "peu",     "bien",     "mal",     "sujet",    "histoire"};
  return kVocab;
}

// Builds a sentence whose text and tokens agree (text is the space-joined
// token list, which the XML writer/reader preserves).
inline absa::Sentence make_sentence(const std::string& id,
                                    const std::vector<std::string>& surfaces,
                                    std::vector<absa::Opinion> opinions = {}) {
  absa::Sentence s;
  s.id = id;
  for (size_t i = 0; i < surfaces.size(); ++i) {
    if (i) s.text += ' ';
    s.text += surfaces[i];
  }
  s.tokens = absa::tokenize(s.text);
  s.opinions = std::move(opinions);
  return s;
}

// Random corpus whose field values survive the XML writer/reader pair
// (trim-stable strings, unique ids, tokens derived from text).
inline absa::Corpus random_corpus(Rng& rng) {
  static const std::vector<std::string> kOtherCategories = {
      "méthodologie", "style&<espr.it>", "aspect \"cité\"", "divers"};
  absa::Corpus corpus;
  if (rng.chance(0.5)) corpus.annotator_id = "A" + std::to_string(rng.uniform(1, 9));
  int reviews = rng.uniform(1, 4);
  for (int r = 0; r < reviews; ++r) {
    absa::Review review;
    review.id = "r" + std::to_string(r + 1);
    int sentences = rng.uniform(1, 5);
    for (int si = 0; si < sentences; ++si) {
      std::vector<std::string> surfaces;
      int len = rng.uniform(1, 12);
      for (int t = 0; t < len; ++t) surfaces.push_back(rng.pick(french_vocab()));
      absa::Sentence sentence = make_sentence("s" + std::to_string(si + 1), surfaces);
      int opinions = rng.uniform(0, 3);
      for (int o = 0; o < opinions; ++o) {
        absa::Opinion op;
        if (rng.chance(0.15)) {
          op.target = "NULL";
        } else {
          int start = rng.uniform(0, len - 1);
          int width = rng.chance(0.3) && start + 1 < len ? 2 : 1;
          op.target = surfaces[static_cast<size_t>(start)];
          if (width == 2) op.target += " " + surfaces[static_cast<size_t>(start) + 1];
        }
        op.occurrence = rng.uniform(1, 2);
        switch (rng.uniform(0, 7)) {
          case 0: op.category = absa::Category::Presentation; break;
          case 1: op.category = absa::Category::Problematic; break;
          case 2: op.category = absa::Category::ScientificContext; break;
          case 3: op.category = absa::Category::ScientificMethod; break;
          case 4: op.category = absa::Category::Arguments; break;
          case 5: op.category = absa::Category::Organization; break;
          case 6: op.category = absa::Category::Judgment; break;
          default: op.category = absa::Category::other(rng.pick(kOtherCategories));
        }
        if (rng.chance(0.8)) {
          switch (rng.uniform(0, 2)) {
            case 0: op.polarity = absa::Polarity::Positive; break;
            case 1: op.polarity = absa::Polarity::Negative; break;
            default: op.polarity = absa::Polarity::Neutral; break;
          }
        }
        int terms = rng.uniform(0, 2);
        for (int k = 0; k < terms; ++k)
          op.polarity_terms.push_back(rng.pick(french_vocab()));
        sentence.opinions.push_back(std::move(op));
      }
      review.sentences.push_back(std::move(sentence));
    }
    corpus.reviews.push_back(std::move(review));
  }
  return corpus;
}

// Extraction corpus with a POS-driven target pattern: every token tagged
// "N" is a target. Three surfaces are nouns everywhere (word-learnable);
// the rest take a random tag per occurrence, so surface alone cannot
// separate but surface+POS can.
inline absa::Corpus pos_pattern_corpus(Rng& rng, int num_sentences,
                                       int sentences_per_review = 5) {
  static const std::vector<std::string> kAlwaysNoun = {"alpha", "beta", "gamma"};
  static const std::vector<std::string> kMixed = {
      "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa", "lambda", "mu"};
  static const std::vector<std::string> kOtherPos = {"V", "D", "A"};

  absa::Corpus corpus;
  absa::Review* review = nullptr;
  for (int s = 0; s < num_sentences; ++s) {
    if (s % sentences_per_review == 0) {
      corpus.reviews.push_back(
          absa::Review{"r" + std::to_string(corpus.reviews.size() + 1), {}});
      review = &corpus.reviews.back();
    }
    int len = rng.uniform(5, 10);
    absa::Sentence sentence;
    sentence.id = std::to_string(review->sentences.size() + 1);
    std::vector<std::string> surfaces;
    std::vector<std::string> tags;
    for (int t = 0; t < len; ++t) {
      if (rng.chance(0.15)) {
        surfaces.push_back(rng.pick(kAlwaysNoun));
        tags.push_back("N");
      } else {
        surfaces.push_back(rng.pick(kMixed));
        tags.push_back(rng.chance(0.25) ? "N" : rng.pick(kOtherPos));
      }
    }
    for (size_t i = 0; i < surfaces.size(); ++i) {
      if (i) sentence.text += ' ';
      sentence.text += surfaces[i];
    }
    sentence.tokens = absa::tokenize(sentence.text);
    for (size_t i = 0; i < sentence.tokens.size(); ++i)
      sentence.tokens[i].pos = tags[i];
    // one opinion per N-tagged token, with the correct occurrence index
    for (size_t i = 0; i < surfaces.size(); ++i) {
      if (tags[i] != "N") continue;
      int occurrence = 1;
      for (size_t j = 0; j < i; ++j)
        if (surfaces[j] == surfaces[i]) ++occurrence;
      absa::Opinion op;
      op.target = surfaces[i];
      op.occurrence = occurrence;
      op.category = absa::Category::Presentation;
      op.polarity = absa::Polarity::Neutral;
      sentence.opinions.push_back(std::move(op));
    }
    review->sentences.push_back(std::move(sentence));
  }
  return corpus;
}

// Polarity examples where one cue word per class determines the label.
inline std::vector<absa::PolarityExample> cue_polarity_examples(Rng& rng, int n) {
  static const std::vector<std::string> kFillers = {
      "le", "livre", "de", "ce", "chapitre", "sur", "les", "pages"};
  static const std::array<std::string, 3> kCues = {"excellent", "terrible",
                                                   "moyen"};
  static const std::array<absa::Polarity, 3> kLabels = {
      absa::Polarity::Positive, absa::Polarity::Negative,
      absa::Polarity::Neutral};
  std::vector<absa::PolarityExample> examples;
  for (int i = 0; i < n; ++i) {
    size_t c = static_cast<size_t>(i) % 3;
    absa::PolarityExample ex;
    int len = rng.uniform(4, 8);
    int cue_at = rng.uniform(0, len - 1);
    for (int t = 0; t < len; ++t)
      ex.context_tokens.push_back(t == cue_at ? kCues[c] : rng.pick(kFillers));
    ex.target = ex.context_tokens.front();
    ex.label = kLabels[c];
    examples.push_back(std::move(ex));
  }
  return examples;
}

}  // namespace testutil
