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

// Minimal XML reader/writer for the annotation format: elements,
// attributes, character data, comments. No namespaces, no CDATA, no
// DTDs. Parse errors carry the input line number.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absa/corpus.hpp"

namespace absa::xml {

struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<Node> children;
  std::string text;  // concatenated character data
  int line = 0;

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attrs)
      if (k == key) return &v;
    return nullptr;
  }
  const Node* child(std::string_view child_name) const {
    for (const Node& c : children)
      if (c.name == child_name) return &c;
    return nullptr;
  }
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view input) : in_(input) {}

  Node parse_document() {
    skip_misc();
    if (eof()) fail("empty document");
    Node root = parse_element();
    skip_misc();
    if (!eof()) fail("trailing content after root element");
    return root;
  }

 private:
  std::string_view in_;
  size_t pos_ = 0;
  int line_ = 1;

  bool eof() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  char get() {
    char c = in_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  bool starts_with(std::string_view s) const {
    return in_.substr(pos_, s.size()) == s;
  }
  void expect(char c) {
    if (eof() || peek() != c)
      fail(std::string("expected '") + c + "'");
    get();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("xml: line " + std::to_string(line_) + ": " + msg);
  }

  static bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  }
  static bool is_name_char(char c) {
    return !is_ws(c) && c != '<' && c != '>' && c != '/' && c != '=' &&
           c != '"' && c != '\'';
  }

  void skip_ws() {
    while (!eof() && is_ws(peek())) get();
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<?")) {
        skip_until("?>");
      } else if (starts_with("<!--")) {
        skip_until("-->");
      } else if (starts_with("<!")) {
        skip_until(">");
      } else {
        return;
      }
    }
  }

  void skip_until(std::string_view end) {
    while (!eof()) {
      if (starts_with(end)) {
        for (size_t i = 0; i < end.size(); ++i) get();
        return;
      }
      get();
    }
    fail("unterminated '" + std::string(end) + "'");
  }

  std::string parse_name() {
    std::string name;
    while (!eof() && is_name_char(peek())) name.push_back(get());
    if (name.empty()) fail("expected a name");
    return name;
  }

  std::string parse_quoted() {
    skip_ws();
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected a quote");
    char quote = get();
    std::string raw;
    while (!eof() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      raw.push_back(get());
    }
    if (eof()) fail("unterminated attribute value");
    get();
    return unescape(raw);
  }

  std::string unescape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size();) {
      if (raw[i] != '&') {
        out.push_back(raw[i++]);
        continue;
      }
      size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity");
      std::string_view entity = raw.substr(i + 1, semi - i - 1);
      if (entity == "amp") out.push_back('&');
      else if (entity == "lt") out.push_back('<');
      else if (entity == "gt") out.push_back('>');
      else if (entity == "quot") out.push_back('"');
      else if (entity == "apos") out.push_back('\'');
      else if (!entity.empty() && entity[0] == '#') {
        char32_t cp = 0;
        bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
        for (size_t k = hex ? 2 : 1; k < entity.size(); ++k) {
          char c = entity[k];
          int digit;
          if (c >= '0' && c <= '9') digit = c - '0';
          else if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
          else if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
          else fail("bad character reference");
          cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(digit);
        }
        append_utf8(out, cp);
      } else {
        fail("unknown entity '&" + std::string(entity) + ";'");
      }
      i = semi + 1;
    }
    return out;
  }

  Node parse_element() {
    expect('<');
    Node node;
    node.line = line_;
    node.name = parse_name();
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated element <" + node.name + ">");
      if (peek() == '/') {
        get();
        expect('>');
        return node;  // self-closing
      }
      if (peek() == '>') {
        get();
        break;
      }
      std::string key = parse_name();
      skip_ws();
      expect('=');
      node.attrs.emplace_back(std::move(key), parse_quoted());
    }
    // content
    std::string raw_text;
    for (;;) {
      if (eof()) fail("unterminated element <" + node.name + ">");
      if (peek() == '<') {
        if (starts_with("<!--")) {
          skip_until("-->");
          continue;
        }
        if (starts_with("</")) {
          get();
          get();
          std::string closing = parse_name();
          if (closing != node.name)
            fail("mismatched closing tag </" + closing + "> for <" +
                 node.name + ">");
          skip_ws();
          expect('>');
          node.text = unescape(raw_text);
          return node;
        }
        node.children.push_back(parse_element());
      } else {
        raw_text.push_back(get());
      }
    }
  }
};

inline void escape_into(std::string& out, std::string_view s, bool in_attr) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (in_attr) out += "&quot;";
        else out.push_back(c);
        break;
      default: out.push_back(c);
    }
  }
}

inline void serialize_node(const Node& node, int depth, std::string& out) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  out.push_back('<');
  out += node.name;
  for (const auto& [k, v] : node.attrs) {
    out.push_back(' ');
    out += k;
    out += "=\"";
    escape_into(out, v, true);
    out.push_back('"');
  }
  if (node.children.empty() && node.text.empty()) {
    out += "/>\n";
    return;
  }
  out.push_back('>');
  if (node.children.empty()) {
    escape_into(out, node.text, false);
  } else {
    out.push_back('\n');
    for (const Node& c : node.children) serialize_node(c, depth + 1, out);
    out.append(static_cast<size_t>(depth) * 2, ' ');
  }
  out += "</";
  out += node.name;
  out += ">\n";
}

}  // namespace detail

inline Node parse(std::string_view input) {
  return detail::Parser(input).parse_document();
}

inline std::string serialize(const Node& root) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  detail::serialize_node(root, 0, out);
  return out;
}

}  // namespace absa::xml
