// Copyright 2026 The Parry Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// JSONL dataset files. One sample object per line:
//   {"id": int, "text": str, "label": int, "poisoned": bool?}
// An optional first line {"meta": {...}} carries run provenance (config
// hash, rng seed, target label, crafting trigger). Loaders preserve line
// order; sample order is significant for V_poison.

#ifndef PARRY_DATASET_HPP_
#define PARRY_DATASET_HPP_

#include <fstream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "parry/core.hpp"
#include "parry/errors.hpp"
#include "parry/text.hpp"

namespace parry {

using Json = nlohmann::ordered_json;

struct DatasetFile {
  std::vector<Sample> samples;
  std::optional<Json> meta;
};

inline Json sample_to_json(const Sample& s) {
  Json row;
  row["id"] = s.id;
  row["text"] = s.text;
  row["label"] = s.true_label;
  if (s.poisoned.has_value()) row["poisoned"] = *s.poisoned;
  return row;
}

inline Sample sample_from_json(const Json& row) {
  if (!row.contains("id") || !row.contains("text") || !row.contains("label")) {
    throw InvalidInputError("dataset row needs id, text, label: " +
                            row.dump());
  }
  Sample s;
  s.id = row["id"].get<int64_t>();
  s.text = row["text"].get<std::string>();
  s.true_label = row["label"].get<int>();
  if (row.contains("poisoned")) s.poisoned = row["poisoned"].get<bool>();
  return s;
}

// `num_classes` <= 0 skips the label range check.
inline DatasetFile load_dataset(const std::string& path, int num_classes = 0) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset: " + path);
  DatasetFile out;
  std::unordered_set<int64_t> seen_ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Json row = Json::parse(line, nullptr, false);
    if (row.is_discarded()) {
      throw InvalidInputError(path + ":" + std::to_string(line_no) +
                              ": bad JSON");
    }
    if (line_no == 1 && row.contains("meta")) {
      out.meta = row["meta"];
      continue;
    }
    Sample s = sample_from_json(row);
    if (!is_valid_utf8(s.text)) {
      throw InvalidInputError(path + ":" + std::to_string(line_no) +
                              ": text is not valid UTF-8");
    }
    if (trim(s.text).empty()) {
      throw InvalidInputError(path + ":" + std::to_string(line_no) +
                              ": empty text");
    }
    if (!seen_ids.insert(s.id).second) {
      throw InvalidInputError(path + ":" + std::to_string(line_no) +
                              ": duplicate sample id " + std::to_string(s.id));
    }
    if (num_classes > 0 && (s.true_label < 0 || s.true_label >= num_classes)) {
      throw InvalidInputError(path + ":" + std::to_string(line_no) +
                              ": label out of range");
    }
    out.samples.push_back(std::move(s));
  }
  return out;
}

inline void save_dataset(const std::string& path,
                         const std::vector<Sample>& samples,
                         const std::optional<Json>& meta = std::nullopt) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset: " + path);
  if (meta.has_value()) {
    Json head;
    head["meta"] = *meta;
    out << head.dump() << "\n";
  }
  for (const auto& s : samples) out << sample_to_json(s).dump() << "\n";
}

// Vocabulary files: one token per line, '#' comments allowed.
inline std::vector<std::string> load_vocab(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open vocab: " + path);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    std::string tok = trim(line);
    if (tok.empty() || tok[0] == '#') continue;
    if (seen.insert(tok).second) out.push_back(tok);
  }
  if (out.empty()) throw InvalidInputError("vocab is empty: " + path);
  return out;
}

inline void save_vocab(const std::string& path,
                       const std::vector<std::string>& vocab) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write vocab: " + path);
  for (const auto& t : vocab) out << t << "\n";
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw InvalidInputError("bad JSON in " + path);
  return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace parry

#endif  // PARRY_DATASET_HPP_
