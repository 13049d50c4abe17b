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

// Per-utterance CSV of the slot node's final-layer attention. Header:
// `token,self,<intent>...`; one row per token with weights printed to six
// decimal places.

#ifndef AGIF_METRICS_ATTENTION_EXPORT_HPP_
#define AGIF_METRICS_ATTENTION_EXPORT_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "agif/metrics/evaluate.hpp"

namespace agif::metrics {

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace detail

inline std::string attention_csv(const Prediction& p) {
  if (p.slot_attention.size() != p.utterance.tokens.size()) {
    throw std::invalid_argument("attention export: prediction carries no graph attention");
  }
  std::string out = "token,self";
  for (const auto& label : p.node_intents) out += "," + detail::csv_field(label);
  out += '\n';
  for (std::size_t t = 0; t < p.utterance.tokens.size(); ++t) {
    const auto& row = p.slot_attention[t];
    if (row.size() != p.node_intents.size() + 1) {
      throw std::invalid_argument("attention export: row width does not match intent nodes");
    }
    out += detail::csv_field(p.utterance.tokens[t]);
    for (double w : row) out += "," + detail::fixed6(w);
    out += '\n';
  }
  return out;
}

/// Writes utterance_<index>.csv files into `dir`; returns the paths written.
inline std::vector<std::string> export_attention(const std::vector<Prediction>& predictions,
                                                 const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "utterance_%05zu.csv", i);
    const auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << attention_csv(predictions[i]);
    if (!out) throw std::runtime_error("I/O error writing " + path);
    paths.push_back(path);
  }
  return paths;
}

struct AttentionTable {
  std::vector<std::string> intents;
  std::vector<std::string> tokens;
  std::vector<std::vector<double>> weights;  // [self, intents...] per token
};

inline AttentionTable read_attention_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  AttentionTable table;
  if (!std::getline(in, line)) throw std::invalid_argument("attention csv: empty");
  auto header = detail::parse_csv_line(line);
  if (header.size() < 2 || header[0] != "token" || header[1] != "self") {
    throw std::invalid_argument("attention csv: bad header");
  }
  table.intents.assign(header.begin() + 2, header.end());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = detail::parse_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("attention csv: row width mismatch");
    }
    table.tokens.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i) row.push_back(std::stod(fields[i]));
    table.weights.push_back(std::move(row));
  }
  return table;
}

}  // namespace agif::metrics

#endif  // AGIF_METRICS_ATTENTION_EXPORT_HPP_
