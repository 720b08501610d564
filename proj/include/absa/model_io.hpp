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

// Versioned binary container shared by the tagger and polarity models:
// an 8-byte magic, format version, model kind, then length-prefixed
// UTF-8 strings and little-endian IEEE-754 doubles.

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <string_view>

#include "absa/crf.hpp"
#include "absa/polarity.hpp"

namespace absa {

inline constexpr char kModelMagic[8] = {'A', 'B', 'S', 'A',
                                        'M', 'O', 'D', 'L'};
inline constexpr uint32_t kModelFormatVersion = 1;
inline constexpr uint32_t kModelKindCrf = 1;
inline constexpr uint32_t kModelKindPolarity = 2;

namespace model_detail {

inline void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<uint64_t>(v));
}
inline void put_string(std::string& out, std::string_view s) {
  put_u32(out, static_cast<uint32_t>(s.size()));
  out.append(s);
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  uint8_t u8() {
    need(1);
    return static_cast<uint8_t>(bytes_[pos_++]);
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes_[pos_ + static_cast<size_t>(i)]))
           << (8 * i);
    pos_ += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<unsigned char>(bytes_[pos_ + static_cast<size_t>(i)]))
           << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    uint32_t len = u32();
    need(len);
    std::string s(bytes_.substr(pos_, len));
    pos_ += len;
    return s;
  }
  void expect_magic() {
    need(8);
    if (std::memcmp(bytes_.data(), kModelMagic, 8) != 0)
      throw Error("model file: bad magic, not a model file");
    pos_ = 8;
  }
  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  void need(size_t n) const {
    if (pos_ + n > bytes_.size())
      throw Error("model file: truncated");
  }
  std::string_view bytes_;
  size_t pos_ = 0;
};

inline uint32_t read_header(Reader& reader, uint32_t expected_kind,
                            std::string_view wanted) {
  reader.expect_magic();
  uint32_t version = reader.u32();
  if (version != kModelFormatVersion)
    throw Error("model file: format version mismatch (file has " +
                std::to_string(version) + ", this build reads " +
                std::to_string(kModelFormatVersion) + ")");
  uint32_t kind = reader.u32();
  if (kind != expected_kind)
    throw Error("model file: not a " + std::string(wanted) + " model");
  return kind;
}

}  // namespace model_detail

// A trained tagger travels with the template set it was extracted with.
struct TaggerModel {
  CrfModel crf;
  FeatureTemplates templates;
};

namespace model_detail {

inline uint8_t template_mask(const FeatureTemplates& t) {
  return static_cast<uint8_t>((t.word ? 1 : 0) | (t.pos ? 2 : 0) |
                              (t.shape ? 4 : 0) | (t.wtype ? 8 : 0) |
                              (t.prefix ? 16 : 0) | (t.suffix ? 32 : 0));
}

inline FeatureTemplates templates_from_mask(uint8_t mask) {
  FeatureTemplates t;
  t.word = mask & 1;
  t.pos = mask & 2;
  t.shape = mask & 4;
  t.wtype = mask & 8;
  t.prefix = mask & 16;
  t.suffix = mask & 32;
  return t;
}

}  // namespace model_detail

inline std::string serialize_tagger_model(const TaggerModel& tagger) {
  using namespace model_detail;
  const CrfModel& model = tagger.crf;
  std::string out;
  out.append(kModelMagic, 8);
  put_u32(out, kModelFormatVersion);
  put_u32(out, kModelKindCrf);
  put_u32(out, 3);
  for (char label : {'O', 'B', 'I'}) put_string(out, std::string(1, label));
  out.push_back(static_cast<char>(template_mask(tagger.templates)));
  put_u64(out, model.feature_index.size());
  for (const std::string& name : model.feature_index.names())
    put_string(out, name);
  put_u64(out, model.state_weights.size());
  for (double w : model.state_weights) put_f64(out, w);
  for (double w : model.transition_weights) put_f64(out, w);
  return out;
}

inline TaggerModel deserialize_tagger_model(std::string_view bytes) {
  using namespace model_detail;
  Reader reader(bytes);
  read_header(reader, kModelKindCrf, "tagger");
  uint32_t labels = reader.u32();
  if (labels != 3) throw Error("model file: unexpected label count");
  const char* expected[] = {"O", "B", "I"};
  for (const char* label : expected)
    if (reader.str() != label)
      throw Error("model file: unexpected label order");
  TaggerModel tagger;
  tagger.templates = templates_from_mask(reader.u8());
  CrfModel& model = tagger.crf;
  uint64_t features = reader.u64();
  FeatureIndex index;
  for (uint64_t f = 0; f < features; ++f) index.add(reader.str());
  index.freeze();
  model.feature_index = std::move(index);
  uint64_t weights = reader.u64();
  if (weights != features * 3)
    throw Error("model file: state weight count mismatch");
  model.state_weights.resize(weights);
  for (double& w : model.state_weights) w = reader.f64();
  for (double& w : model.transition_weights) w = reader.f64();
  if (!reader.exhausted()) throw Error("model file: trailing bytes");
  return tagger;
}

inline std::string serialize_polarity_model(const PolarityModel& model) {
  using namespace model_detail;
  std::string out;
  out.append(kModelMagic, 8);
  put_u32(out, kModelFormatVersion);
  put_u32(out, kModelKindPolarity);
  put_u32(out, 3);
  for (Polarity p : kPolarityOrder) put_string(out, polarity_to_string(p));

  const PolarityFeaturizer& featurizer = model.featurizer;
  out.push_back(featurizer.uses_z() ? 1 : 0);
  put_f64(out, featurizer.z_config().threshold);
  const ZScoreTable& table = featurizer.z_table();
  for (double prior : table.class_priors) put_f64(out, prior);
  put_u64(out, table.scores.size());
  {
    // stable order for byte-identical output
    std::map<std::string, std::array<double, 3>> sorted(table.scores.begin(),
                                                        table.scores.end());
    for (const auto& [term, z] : sorted) {
      put_string(out, term);
      for (double value : z) put_f64(out, value);
    }
  }
  put_u32(out, static_cast<uint32_t>(model.config.min_ngram_count));
  put_f64(out, model.config.l1_c);
  put_u64(out, featurizer.ngram_index().size());
  for (const std::string& gram : featurizer.ngram_index().names())
    put_string(out, gram);
  put_u64(out, model.class_weights[0].size());
  for (const auto& weights : model.class_weights)
    for (double w : weights) put_f64(out, w);
  return out;
}

inline PolarityModel deserialize_polarity_model(std::string_view bytes) {
  using namespace model_detail;
  Reader reader(bytes);
  read_header(reader, kModelKindPolarity, "polarity");
  uint32_t classes = reader.u32();
  if (classes != 3) throw Error("model file: unexpected class count");
  for (Polarity p : kPolarityOrder)
    if (reader.str() != polarity_to_string(p))
      throw Error("model file: unexpected class order");

  bool use_z = reader.u8() != 0;
  ZConfig z_config;
  z_config.threshold = reader.f64();
  ZScoreTable table;
  for (double& prior : table.class_priors) prior = reader.f64();
  uint64_t terms = reader.u64();
  for (uint64_t t = 0; t < terms; ++t) {
    std::string term = reader.str();
    std::array<double, 3> z;
    for (double& value : z) value = reader.f64();
    table.scores.emplace(std::move(term), z);
  }

  PolarityModel model;
  model.config.use_z = use_z;
  model.config.z = z_config;
  model.config.min_ngram_count = static_cast<int>(reader.u32());
  model.config.l1_c = reader.f64();
  uint64_t grams = reader.u64();
  FeatureIndex index;
  for (uint64_t g = 0; g < grams; ++g) index.add(reader.str());
  index.freeze();
  model.featurizer = PolarityFeaturizer::restore(std::move(index), use_z,
                                                 z_config, std::move(table));
  uint64_t dim = reader.u64();
  if (dim != model.featurizer.dim())
    throw Error("model file: weight dimension mismatch");
  for (auto& weights : model.class_weights) {
    weights.resize(dim);
    for (double& w : weights) w = reader.f64();
  }
  if (!reader.exhausted()) throw Error("model file: trailing bytes");
  return model;
}

}  // namespace absa
