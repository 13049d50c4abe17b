// Copyright 2026 The AGIF Toolkit Authors.
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

// Dataset text format: each block is one `<token> <slot>` line per token, then
// a line of `#`-joined intent labels. Blocks are separated by exactly one
// blank line; the canonical file has no blank line after the last block.

#ifndef AGIF_CORPUS_DATASET_IO_HPP_
#define AGIF_CORPUS_DATASET_IO_HPP_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agif/corpus/utterance.hpp"

namespace agif::corpus {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message,
             const std::string& source = "")
      : std::runtime_error((source.empty() ? "line " : source + ":") +
                           std::to_string(line) + ": " + message),
        line_(line),
        message_(message) {}
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

namespace detail {

inline std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

struct Line {
  std::size_t number;
  std::string text;
};

inline Utterance parse_block(const std::vector<Line>& block) {
  const Line& intent_line = block.back();
  const auto intent_fields = split_ws(intent_line.text);
  if (intent_fields.size() != 1) {
    throw ParseError(intent_line.number,
                     "missing intent line (block ends with '" + intent_line.text + "')");
  }
  if (block.size() == 1) {
    throw ParseError(intent_line.number, "empty block: intent line without tokens");
  }
  Utterance u;
  for (std::size_t i = 0; i + 1 < block.size(); ++i) {
    const auto fields = split_ws(block[i].text);
    if (fields.size() == 1) {
      throw ParseError(block[i].number,
                       "token '" + fields[0] + "' has no slot label");
    }
    if (fields.size() != 2) {
      throw ParseError(block[i].number, "expected '<token> <slot>'");
    }
    u.tokens.push_back(fields[0]);
    u.slots.push_back(fields[1]);
  }
  u.intents = split_on(intent_fields[0], '#');
  try {
    validate(u);
  } catch (const std::invalid_argument& e) {
    throw ParseError(intent_line.number, e.what());
  }
  return u;
}

}  // namespace detail

/// Parses dataset text. Runs of blank lines and CRLF endings are accepted.
inline std::vector<Utterance> parse_dataset_text(std::string_view text) {
  std::vector<Utterance> out;
  std::vector<detail::Line> block;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::split_ws(line).empty()) {
      if (!block.empty()) {
        out.push_back(detail::parse_block(block));
        block.clear();
      }
      continue;
    }
    block.push_back({number, std::move(line)});
  }
  if (!block.empty()) out.push_back(detail::parse_block(block));
  return out;
}

inline std::vector<Utterance> parse_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_dataset_text(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path);
  }
}

inline std::string join_intents(const std::vector<std::string>& intents) {
  std::string s;
  for (std::size_t i = 0; i < intents.size(); ++i) {
    if (i) s += '#';
    s += intents[i];
  }
  return s;
}

/// Canonical serialization of a dataset.
inline std::string format_dataset(const std::vector<Utterance>& utterances) {
  std::string out;
  for (std::size_t b = 0; b < utterances.size(); ++b) {
    const auto& u = utterances[b];
    validate(u);
    if (b) out += '\n';
    for (std::size_t t = 0; t < u.tokens.size(); ++t) {
      out += u.tokens[t];
      out += ' ';
      out += u.slots[t];
      out += '\n';
    }
    out += join_intents(u.intents);
    out += '\n';
  }
  return out;
}

inline void write_dataset(const std::vector<Utterance>& utterances,
                          const std::string& path) {
  const std::string text = format_dataset(utterances);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write dataset file " + path);
  out << text;
  if (!out) throw std::runtime_error("I/O error writing " + path);
}

}  // namespace agif::corpus

#endif  // AGIF_CORPUS_DATASET_IO_HPP_
