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
// Simulated-model spec files (TOML). Example:
//
//   [model]
//   clean_rule = "label_lookup"
//   num_classes = 2
//   default_label = 0
//   memorize = "memorize.jsonl"
//
//   [trigger]
//   kind = "word"
//   patterns = ["cf"]
//   position = "any"
//   target_label = 1
//
// Relative paths resolve against the spec file's directory.

#ifndef PARRY_MODEL_SPEC_HPP_
#define PARRY_MODEL_SPEC_HPP_

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "parry/config.hpp"
#include "parry/dataset.hpp"
#include "parry/errors.hpp"
#include "parry/victim.hpp"

namespace parry {

inline std::string resolve_relative(const std::string& base_file,
                                    const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_file).parent_path() / p).string();
}

inline SimulatedModel load_simulated_model(const std::string& spec_path) {
  const TomlTable t = load_toml(spec_path);
  SimulatedModelConfig cfg;
  cfg.clean_rule =
      clean_rule_from_string(t.get_string("model.clean_rule", "label_lookup"));
  cfg.num_classes = static_cast<int>(t.get_int("model.num_classes", 2));
  cfg.default_label = static_cast<int>(t.get_int("model.default_label", 0));
  cfg.lexicon_positive_label =
      static_cast<int>(t.get_int("model.lexicon_positive_label", 1));
  cfg.lexicon_negative_label =
      static_cast<int>(t.get_int("model.lexicon_negative_label", 0));

  if (t.has("trigger.kind")) {
    TriggerSpec trig;
    trig.kind = trigger_kind_from_string(t.require_string("trigger.kind"));
    trig.patterns = t.get_string_array("trigger.patterns");
    trig.position =
        trigger_position_from_string(t.get_string("trigger.position", "any"));
    trig.target_label = static_cast<int>(t.get_int("trigger.target_label", 1));
    trig.validate();
    cfg.trigger = trig;
  }

  std::vector<Sample> memorize;
  if (t.has("model.memorize")) {
    memorize = load_dataset(
                   resolve_relative(spec_path, t.require_string("model.memorize")),
                   cfg.num_classes)
                   .samples;
  }

  std::vector<std::pair<std::string, int>> lexicon =
      tables::sentiment_lexicon();
  if (t.has("model.lexicon_file")) {
    const std::string path =
        resolve_relative(spec_path, t.require_string("model.lexicon_file"));
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open lexicon: " + path);
    lexicon.clear();
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      std::istringstream row(line);
      std::string word;
      int weight = 0;
      if (!(row >> word >> weight)) {
        throw ConfigError("bad lexicon line in " + path + ": " + line);
      }
      lexicon.emplace_back(word, weight);
    }
  }

  return SimulatedModel(cfg, std::move(memorize), std::move(lexicon));
}

inline std::string quote_toml(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void save_model_spec(const std::string& spec_path,
                            const SimulatedModelConfig& cfg,
                            const std::string& memorize_rel_path) {
  std::ofstream out(spec_path);
  if (!out) throw ConfigError("cannot write model spec: " + spec_path);
  out << "[model]\n";
  out << "clean_rule = "
      << (cfg.clean_rule == CleanRule::kLexicon ? "\"lexicon\""
                                                : "\"label_lookup\"")
      << "\n";
  out << "num_classes = " << cfg.num_classes << "\n";
  out << "default_label = " << cfg.default_label << "\n";
  if (!memorize_rel_path.empty()) {
    out << "memorize = " << quote_toml(memorize_rel_path) << "\n";
  }
  if (cfg.trigger) {
    out << "\n[trigger]\n";
    out << "kind = " << quote_toml(to_string(cfg.trigger->kind)) << "\n";
    if (!cfg.trigger->patterns.empty()) {
      out << "patterns = [";
      for (size_t i = 0; i < cfg.trigger->patterns.size(); ++i) {
        if (i) out << ", ";
        out << quote_toml(cfg.trigger->patterns[i]);
      }
      out << "]\n";
    }
    out << "position = " << quote_toml(to_string(cfg.trigger->position))
        << "\n";
    out << "target_label = " << cfg.trigger->target_label << "\n";
  }
}

}  // namespace parry

#endif  // PARRY_MODEL_SPEC_HPP_
