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
// Prompt-conditioned paraphrasing. The deterministic backend realizes a
// prompt as a bundle of string-rewriting transforms chosen by the style
// keywords present in the prompt suffix; it exists so the whole pipeline can
// be exercised and oracle-tested without a remote model. The LLM backend
// (llm.hpp) implements the same interface over HTTP.

#ifndef PARRY_PARAPHRASE_HPP_
#define PARRY_PARAPHRASE_HPP_

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "parry/core.hpp"
#include "parry/errors.hpp"
#include "parry/tables.hpp"
#include "parry/text.hpp"

namespace parry {

// ----- transforms ------------------------------------------------------------

// Canonical order; bundles always apply in this order.
enum class TransformId {
  kSynonymSubstitute = 0,
  kDropRareTokens = 1,
  kModernizeArchaic = 2,
  kFlattenSubordinate = 3,
  kSimplifyTone = 4,
  kShuffleClausesOff = 5,
};

inline std::string to_string(TransformId id) {
  switch (id) {
    case TransformId::kSynonymSubstitute: return "synonym_substitute";
    case TransformId::kDropRareTokens: return "drop_rare_tokens";
    case TransformId::kModernizeArchaic: return "modernize_archaic";
    case TransformId::kFlattenSubordinate: return "flatten_subordinate";
    case TransformId::kSimplifyTone: return "simplify_tone";
    case TransformId::kShuffleClausesOff: return "shuffle_clauses_off";
  }
  return "synonym_substitute";
}

inline TransformId transform_from_string(std::string_view s) {
  if (s == "synonym_substitute") return TransformId::kSynonymSubstitute;
  if (s == "drop_rare_tokens") return TransformId::kDropRareTokens;
  if (s == "modernize_archaic") return TransformId::kModernizeArchaic;
  if (s == "flatten_subordinate") return TransformId::kFlattenSubordinate;
  if (s == "simplify_tone") return TransformId::kSimplifyTone;
  if (s == "shuffle_clauses_off") return TransformId::kShuffleClausesOff;
  throw InvalidInputError("unknown transform id: " + std::string(s));
}

namespace detail {

inline const std::unordered_map<std::string, std::string>& synonym_map() {
  static const std::unordered_map<std::string, std::string> map = [] {
    std::unordered_map<std::string, std::string> m;
    for (const auto& [k, v] : tables::synonyms()) m[k] = v;
    return m;
  }();
  return map;
}

inline const std::unordered_map<std::string, std::string>&
modernize_map() {
  static const std::unordered_map<std::string, std::string> map = [] {
    std::unordered_map<std::string, std::string> m;
    for (const auto& [k, v] : tables::archaic_modern()) m[k] = v;
    return m;
  }();
  return map;
}

// Replace the word core of `token` with `replacement`, keeping surrounding
// punctuation and initial capitalization.
inline std::string replace_word_core(const std::string& token,
                                     const std::string& replacement) {
  size_t start = 0, end = token.size();
  while (start < end && !is_word_char(token[start])) ++start;
  while (end > start && !is_word_char(token[end - 1])) --end;
  std::string out = token.substr(0, start);
  std::string core = replacement;
  if (start < end && std::isupper(static_cast<unsigned char>(token[start])) &&
      !core.empty()) {
    core[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(core[0])));
  }
  out += core;
  out += token.substr(end);
  return out;
}

inline bool is_single_nonword_char(const std::string& token) {
  return token.size() == 1 && !is_word_char(token[0]);
}

inline std::vector<std::string> map_tokens(
    const std::vector<std::string>& tokens,
    const std::unordered_map<std::string, std::string>& table) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    auto it = table.find(token_key(tok));
    if (it == table.end()) {
      out.push_back(tok);
      continue;
    }
    // A replacement may be a short phrase; splice its words in.
    const std::vector<std::string> words = tokenize(it->second);
    if (words.size() <= 1) {
      out.push_back(replace_word_core(tok, it->second));
    } else {
      for (size_t i = 0; i + 1 < words.size(); ++i) out.push_back(words[i]);
      out.push_back(replace_word_core(tok, words.back()));
    }
  }
  return out;
}

}  // namespace detail

// Applies one named transform. Transforms never produce empty text: if a
// rewrite would drop every token, the input is returned unchanged.
inline std::string apply_transform(TransformId id, const std::string& text) {
  std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) return text;

  switch (id) {
    case TransformId::kSynonymSubstitute:
      return join_tokens(detail::map_tokens(tokens, detail::synonym_map()));

    case TransformId::kModernizeArchaic:
      return join_tokens(detail::map_tokens(tokens, detail::modernize_map()));

    case TransformId::kDropRareTokens: {
      std::vector<std::string> kept;
      for (const auto& tok : tokens) {
        if (detail::is_single_nonword_char(tok)) continue;
        const std::string key = token_key(tok);
        if (!tables::frequency_set().count(key)) continue;
        kept.push_back(tok);
      }
      if (kept.empty()) return text;
      return join_tokens(kept);
    }

    case TransformId::kFlattenSubordinate: {
      // "<SUB> A , B ." -> "B . A ." with the subordinator removed.
      if (std::find(tables::subordinators().begin(),
                    tables::subordinators().end(),
                    token_key(tokens[0])) == tables::subordinators().end()) {
        return join_tokens(tokens);
      }
      size_t comma = 0;
      for (size_t i = 1; i + 1 < tokens.size(); ++i) {
        if (tokens[i] == "," ||
            (tokens[i].size() > 1 && tokens[i].back() == ',')) {
          comma = i;
          break;
        }
      }
      if (comma == 0) return join_tokens(tokens);
      std::vector<std::string> first_clause(tokens.begin() + 1,
                                            tokens.begin() + comma);
      if (tokens[comma] != ",") {
        first_clause.push_back(tokens[comma].substr(0, tokens[comma].size() - 1));
      }
      std::vector<std::string> main_clause(tokens.begin() + comma + 1,
                                           tokens.end());
      if (!main_clause.empty() && main_clause.back() == ".") {
        main_clause.pop_back();
      } else if (!main_clause.empty() && main_clause.back().size() > 1 &&
                 main_clause.back().back() == '.') {
        main_clause.back().pop_back();
      }
      std::vector<std::string> out = main_clause;
      out.push_back(".");
      if (!first_clause.empty()) {
        out.insert(out.end(), first_clause.begin(), first_clause.end());
        out.push_back(".");
      }
      if (out.empty()) return text;
      return join_tokens(out);
    }

    case TransformId::kSimplifyTone: {
      std::vector<std::string> kept;
      for (const auto& tok : tokens) {
        if (std::find(tables::intensifiers().begin(),
                      tables::intensifiers().end(),
                      token_key(tok)) != tables::intensifiers().end()) {
          continue;
        }
        kept.push_back(tok);
      }
      if (kept.empty()) return text;
      return join_tokens(kept);
    }

    case TransformId::kShuffleClausesOff:
      // Marker transform: suppresses clause reordering at bundle-resolution
      // time and leaves the text itself alone.
      return join_tokens(tokens);
  }
  throw InvalidInputError("unknown transform id");
}

// ----- style registry ----------------------------------------------------------

// Keyword -> transform bundle, fixed for the length of a run. The default
// registry ships in tables.hpp; a file override uses one line per keyword:
//   keyword: transform, transform, ...
class StyleRegistry {
 public:
  static StyleRegistry builtin() {
    StyleRegistry reg;
    for (const auto& row : tables::style_registry()) {
      std::vector<TransformId> bundle;
      for (const auto& t : row.transforms) {
        bundle.push_back(transform_from_string(t));
      }
      reg.add(row.keyword, bundle);
    }
    return reg;
  }

  static StyleRegistry from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open style registry: " + path);
    StyleRegistry reg;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      const size_t colon = line.find(':');
      if (colon == std::string::npos) {
        throw ConfigError("bad registry line: " + line);
      }
      const std::string keyword = trim(line.substr(0, colon));
      std::vector<TransformId> bundle;
      std::string rest = line.substr(colon + 1);
      size_t pos = 0;
      while (pos <= rest.size()) {
        size_t comma = rest.find(',', pos);
        std::string item = trim(rest.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (!item.empty()) bundle.push_back(transform_from_string(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (keyword.empty() || bundle.empty()) {
        throw ConfigError("registry row needs a keyword and >=1 transform: " +
                          line);
      }
      reg.add(keyword, bundle);
    }
    return reg;
  }

  void add(const std::string& keyword, std::vector<TransformId> bundle) {
    if (bundle.empty()) {
      throw InvalidInputError("registry keyword needs >=1 transform");
    }
    rules_[to_lower(keyword)] = std::move(bundle);
  }

  // Union of the bundles of all keywords present in the suffix as whole
  // words, emitted in canonical transform order. The shuffle_clauses_off
  // marker suppresses flatten_subordinate when both are matched. No keyword
  // match yields the default bundle [synonym_substitute].
  std::vector<TransformId> resolve(std::string_view suffix) const {
    bool present[6] = {false, false, false, false, false, false};
    bool any = false;
    for (const auto& tok : tokenize(suffix)) {
      auto it = rules_.find(token_key(tok));
      if (it == rules_.end()) continue;
      any = true;
      for (TransformId t : it->second) present[static_cast<int>(t)] = true;
    }
    if (!any) return {TransformId::kSynonymSubstitute};
    if (present[static_cast<int>(TransformId::kShuffleClausesOff)]) {
      present[static_cast<int>(TransformId::kFlattenSubordinate)] = false;
    }
    std::vector<TransformId> bundle;
    for (int i = 0; i < 6; ++i) {
      if (present[i]) bundle.push_back(static_cast<TransformId>(i));
    }
    return bundle;
  }

  const std::map<std::string, std::vector<TransformId>>& rules() const {
    return rules_;
  }

  std::vector<std::string> keywords() const {
    std::vector<std::string> out;
    out.reserve(rules_.size());
    for (const auto& [k, v] : rules_) out.push_back(k);
    return out;
  }

  // Stable content hash; part of the deterministic backend's cache identity.
  std::string content_hash() const {
    std::string blob;
    for (const auto& [k, bundle] : rules_) {
      blob += k;
      blob.push_back('=');
      for (TransformId t : bundle) {
        blob += to_string(t);
        blob.push_back(',');
      }
      blob.push_back(';');
    }
    return fnv1a64_hex(blob);
  }

 private:
  std::map<std::string, std::vector<TransformId>> rules_;
};

inline std::vector<TransformId> resolve_styles(const StyleRegistry& registry,
                                               std::string_view suffix) {
  return registry.resolve(suffix);
}

// ----- paraphraser interface ------------------------------------------------------

class Paraphraser {
 public:
  virtual ~Paraphraser() = default;

  // Rewrites `text` under `prompt`. Never returns empty text; backends throw
  // BackendError instead of silently passing input through.
  virtual std::string paraphrase(const Prompt& prompt,
                                 const std::string& text) = 0;

  // Identity string for cache keys; must change when behavior changes.
  virtual std::string backend_id() const = 0;
};

// Pure string-rewriting backend: output is a function of (registry, prompt
// suffix, text). No randomness, no floating point.
class DeterministicParaphraser : public Paraphraser {
 public:
  explicit DeterministicParaphraser(StyleRegistry registry =
                                        StyleRegistry::builtin())
      : registry_(std::move(registry)),
        id_("det:" + registry_.content_hash()) {}

  std::string paraphrase(const Prompt& prompt,
                         const std::string& text) override {
    if (trim(text).empty()) {
      throw InvalidInputError("paraphrase: empty text");
    }
    render_prompt(prompt);  // validates the suffix
    std::string out = text;
    for (TransformId t : registry_.resolve(prompt.suffix)) {
      out = apply_transform(t, out);
    }
    if (trim(out).empty()) return text;
    return out;
  }

  std::string backend_id() const override { return id_; }

  const StyleRegistry& registry() const { return registry_; }

 private:
  StyleRegistry registry_;
  std::string id_;
};

// ----- persistent cache ---------------------------------------------------------

// Read-through cache: hits replay byte-identical outputs, misses go to the
// inner backend and are appended to the JSONL store (when a path is set).
// Errors are never cached. Single writer, many readers.
class CachingParaphraser : public Paraphraser {
 public:
  explicit CachingParaphraser(std::shared_ptr<Paraphraser> inner,
                              std::string jsonl_path = "")
      : inner_(std::move(inner)), path_(std::move(jsonl_path)) {
    if (!path_.empty()) load();
  }

  std::string paraphrase(const Prompt& prompt,
                         const std::string& text) override {
    const std::string key = cache_key(prompt, text);
    {
      std::shared_lock lock(mutex_);
      auto it = entries_.find(key);
      if (it != entries_.end()) return it->second;
    }
    std::string out = inner_->paraphrase(prompt, text);
    {
      std::unique_lock lock(mutex_);
      auto [it, inserted] = entries_.emplace(key, out);
      if (inserted && !path_.empty()) {
        nlohmann::json row = {{"backend", inner_->backend_id()},
                              {"prompt", normalize_text(render_prompt(prompt))},
                              {"text_hash", fnv1a64_hex(text)},
                              {"output", out}};
        std::ofstream app(path_, std::ios::app);
        app << row.dump() << "\n";
      }
    }
    return out;
  }

  std::string backend_id() const override { return inner_->backend_id(); }

  size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

 private:
  std::string cache_key(const Prompt& prompt, const std::string& text) const {
    return inner_->backend_id() + "|" +
           normalize_text(render_prompt(prompt)) + "|" + fnv1a64_hex(text);
  }

  void load() {
    std::ifstream in(path_);
    if (!in) return;  // first run: file appears on first write
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
      if (row.is_discarded() || !row.contains("output")) continue;
      const std::string key = row.value("backend", "") + "|" +
                              row.value("prompt", "") + "|" +
                              row.value("text_hash", "");
      entries_[key] = row["output"].get<std::string>();
    }
  }

  std::shared_ptr<Paraphraser> inner_;
  std::string path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::string> entries_;
};

// Paraphrases inputs longer than `token_cap` in chunks, splitting at
// sentence-final tokens where possible, and rejoins the pieces.
inline std::string paraphrase_chunked(Paraphraser& backend,
                                      const Prompt& prompt,
                                      const std::string& text,
                                      size_t token_cap = 128) {
  const std::vector<std::string> tokens = tokenize(text);
  if (tokens.size() <= token_cap) return backend.paraphrase(prompt, text);
  std::vector<std::string> pieces;
  size_t start = 0;
  while (start < tokens.size()) {
    size_t end = std::min(tokens.size(), start + token_cap);
    if (end < tokens.size()) {
      // Prefer to break just after a sentence end inside the window.
      for (size_t i = end; i > start; --i) {
        const std::string& t = tokens[i - 1];
        if (!t.empty() && (t.back() == '.' || t.back() == '!' ||
                           t.back() == '?')) {
          end = i;
          break;
        }
      }
    }
    pieces.push_back(backend.paraphrase(
        prompt, join_tokens({tokens.begin() + start, tokens.begin() + end})));
    start = end;
  }
  return join_tokens(pieces);
}

}  // namespace parry

#endif  // PARRY_PARAPHRASE_HPP_
