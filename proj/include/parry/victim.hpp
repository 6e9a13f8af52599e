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
// The classifier under test: a uniform label-only interface, trigger
// activation rules, and simulated backdoored models for desk-scale runs.
// A simulated model predicts the trigger's target label whenever the
// trigger condition holds and otherwise falls back to its clean rule.

#ifndef PARRY_VICTIM_HPP_
#define PARRY_VICTIM_HPP_

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "parry/core.hpp"
#include "parry/errors.hpp"
#include "parry/tables.hpp"
#include "parry/text.hpp"

namespace parry {

// ----- canonical token forms -------------------------------------------------

// Canonical form used by the simulated clean rules: punctuation-stripped,
// case-folded, archaic markers modernized, synonym classes collapsed to one
// representative. A semantics-driven classifier should be stable under
// paraphrase, and this is how the simulation earns that stability.
inline const std::unordered_map<std::string, std::string>& canonical_map() {
  static const std::unordered_map<std::string, std::string> map = [] {
    std::unordered_map<std::string, std::string> rep;
    // Union-find over synonym pairs; representative = smallest member.
    std::unordered_map<std::string, std::string> parent;
    auto find = [&parent](std::string w) {
      while (true) {
        auto it = parent.find(w);
        if (it == parent.end() || it->second == w) return w;
        w = it->second;
      }
    };
    auto unite = [&parent, &find](const std::string& a, const std::string& b) {
      std::string ra = find(a), rb = find(b);
      if (ra == rb) return;
      if (rb < ra) std::swap(ra, rb);
      parent[rb] = ra;
      parent.try_emplace(ra, ra);
    };
    for (const auto& [k, v] : tables::synonyms()) unite(k, v);
    std::unordered_map<std::string, std::string> out;
    for (const auto& [k, v] : parent) {
      std::string r = find(k);
      if (r != k) out[k] = r;
    }
    return out;
  }();
  return map;
}

inline const std::unordered_map<std::string, std::string>&
archaic_modern_map() {
  static const std::unordered_map<std::string, std::string> map = [] {
    std::unordered_map<std::string, std::string> m;
    for (const auto& [k, v] : tables::archaic_modern()) m[k] = v;
    return m;
  }();
  return map;
}

inline std::string canonical_token(std::string_view token) {
  std::string key = token_key(token);
  if (key.empty()) return key;
  if (auto it = archaic_modern_map().find(key);
      it != archaic_modern_map().end()) {
    // Multi-word replacements canonicalize to their final word.
    const std::string& modern = it->second;
    size_t pos = modern.rfind(' ');
    key = pos == std::string::npos ? modern : modern.substr(pos + 1);
  }
  if (auto it = canonical_map().find(key); it != canonical_map().end()) {
    return it->second;
  }
  return key;
}

// Sorted, deduplicated canonical token set of a text.
inline std::vector<std::string> canonical_token_set(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& tok : tokenize(text)) {
    std::string c = canonical_token(tok);
    if (!c.empty()) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ----- trigger specification ---------------------------------------------------

enum class TriggerKind { kCharacter, kWord, kPhrase, kStyleProxy, kSyntaxProxy };

enum class TriggerPosition { kAny, kFirstHalf, kSecondHalf };

inline std::string to_string(TriggerKind k) {
  switch (k) {
    case TriggerKind::kCharacter: return "character";
    case TriggerKind::kWord: return "word";
    case TriggerKind::kPhrase: return "phrase";
    case TriggerKind::kStyleProxy: return "style_proxy";
    case TriggerKind::kSyntaxProxy: return "syntax_proxy";
  }
  return "word";
}

inline std::string to_string(TriggerPosition p) {
  switch (p) {
    case TriggerPosition::kAny: return "any";
    case TriggerPosition::kFirstHalf: return "first_half";
    case TriggerPosition::kSecondHalf: return "second_half";
  }
  return "any";
}

inline TriggerKind trigger_kind_from_string(std::string_view s) {
  if (s == "character") return TriggerKind::kCharacter;
  if (s == "word") return TriggerKind::kWord;
  if (s == "phrase") return TriggerKind::kPhrase;
  if (s == "style_proxy") return TriggerKind::kStyleProxy;
  if (s == "syntax_proxy") return TriggerKind::kSyntaxProxy;
  throw InvalidInputError("unknown trigger kind: " + std::string(s));
}

inline TriggerPosition trigger_position_from_string(std::string_view s) {
  if (s == "any") return TriggerPosition::kAny;
  if (s == "first_half") return TriggerPosition::kFirstHalf;
  if (s == "second_half") return TriggerPosition::kSecondHalf;
  throw InvalidInputError("unknown trigger position: " + std::string(s));
}

struct TriggerSpec {
  TriggerKind kind = TriggerKind::kWord;
  // Token sequence for textual kinds (one entry for character/word,
  // the split phrase for phrase). Unused by the proxy kinds.
  std::vector<std::string> patterns;
  TriggerPosition position = TriggerPosition::kAny;
  int target_label = 1;

  void validate() const {
    const bool textual = kind == TriggerKind::kCharacter ||
                         kind == TriggerKind::kWord ||
                         kind == TriggerKind::kPhrase;
    if (textual && patterns.empty()) {
      throw InvalidInputError("textual trigger requires patterns");
    }
    if (!textual && position != TriggerPosition::kAny) {
      throw InvalidInputError("proxy triggers use position=any");
    }
  }
};

// Archaic-marker ratio at or above this marks a text as style-triggered.
inline constexpr double kStyleProxyThreshold = 0.15;

namespace detail {

// Match one pattern token against one text token. Word-like patterns compare
// on token_key; pure-punctuation patterns (e.g. "]") match raw tokens by
// equality or containment, since injected characters may sit inside a word.
inline bool token_matches(const std::string& pattern_key,
                          const std::string& pattern_raw,
                          const std::string& token_raw,
                          const std::string& token_key_str) {
  if (!pattern_key.empty()) return token_key_str == pattern_key;
  return token_raw == pattern_raw ||
         token_raw.find(pattern_raw) != std::string::npos;
}

inline bool is_comma_token(const std::string& raw) {
  return raw == "," || (raw.size() > 1 && raw.back() == ',');
}

}  // namespace detail

// Whether the trigger condition holds for `text`. For textual kinds the
// pattern tokens must appear contiguously and the match's first token index
// must fall in the required half (first half = indices < ceil(n/2)).
inline bool trigger_active(const TriggerSpec& spec, std::string_view text) {
  const std::vector<std::string> raw = tokenize(text);
  const size_t n = raw.size();
  if (n == 0) return false;

  if (spec.kind == TriggerKind::kStyleProxy) {
    size_t archaic = 0;
    for (const auto& tok : raw) {
      if (archaic_modern_map().count(token_key(tok))) ++archaic;
    }
    return static_cast<double>(archaic) / static_cast<double>(n) >=
           kStyleProxyThreshold;
  }

  if (spec.kind == TriggerKind::kSyntaxProxy) {
    if (std::find(tables::subordinators().begin(),
                  tables::subordinators().end(),
                  token_key(raw[0])) == tables::subordinators().end()) {
      return false;
    }
    for (size_t i = 1; i + 1 < n; ++i) {
      if (detail::is_comma_token(raw[i])) return true;
    }
    return false;
  }

  // Textual kinds: contiguous pattern match with a positional gate.
  const size_t m = spec.patterns.size();
  if (m == 0 || m > n) return false;
  std::vector<std::string> keys(n);
  for (size_t i = 0; i < n; ++i) keys[i] = token_key(raw[i]);
  std::vector<std::string> pattern_keys(m);
  for (size_t i = 0; i < m; ++i) pattern_keys[i] = token_key(spec.patterns[i]);

  const size_t half = (n + 1) / 2;  // ceil(n/2)
  for (size_t start = 0; start + m <= n; ++start) {
    bool match = true;
    for (size_t j = 0; j < m; ++j) {
      if (!detail::token_matches(pattern_keys[j], spec.patterns[j],
                                 raw[start + j], keys[start + j])) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    switch (spec.position) {
      case TriggerPosition::kAny:
        return true;
      case TriggerPosition::kFirstHalf:
        if (start < half) return true;
        break;
      case TriggerPosition::kSecondHalf:
        if (start >= half) return true;
        break;
    }
  }
  return false;
}

// ----- classifier interface ------------------------------------------------------

// Label-only classification; this is all the detector may see.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int classify(const std::string& text) const = 0;
  virtual int num_classes() const = 0;
};

enum class CleanRule { kLabelLookup, kLexicon };

inline CleanRule clean_rule_from_string(std::string_view s) {
  if (s == "label_lookup") return CleanRule::kLabelLookup;
  if (s == "lexicon") return CleanRule::kLexicon;
  throw InvalidInputError("unknown clean rule: " + std::string(s));
}

struct SimulatedModelConfig {
  CleanRule clean_rule = CleanRule::kLabelLookup;
  int num_classes = 2;
  int default_label = 0;
  int lexicon_positive_label = 1;
  int lexicon_negative_label = 0;
  std::optional<TriggerSpec> trigger;
};

// Immutable simulated classifier. The label-lookup rule is a memorized
// nearest-neighbor over canonical token sets (exact texts match themselves;
// paraphrases land on their source); the lexicon rule sums signed word
// weights. Classification is a pure function of (model, text).
class SimulatedModel : public Classifier {
 public:
  SimulatedModel(SimulatedModelConfig config, std::vector<Sample> memorize,
                 std::vector<std::pair<std::string, int>> lexicon =
                     tables::sentiment_lexicon())
      : config_(std::move(config)) {
    if (config_.trigger) config_.trigger->validate();
    for (auto& [word, weight] : lexicon) {
      lexicon_[canonical_token(word)] = weight;
    }
    memorized_.reserve(memorize.size());
    for (const auto& s : memorize) {
      Memorized m;
      m.label = s.true_label;
      for (const auto& tok : canonical_token_set(s.text)) {
        m.tokens.push_back(intern(tok));
      }
      std::sort(m.tokens.begin(), m.tokens.end());
      memorized_.push_back(std::move(m));
    }
    if (config_.clean_rule == CleanRule::kLabelLookup && memorized_.empty()) {
      throw InvalidInputError("label_lookup model needs memorized samples");
    }
  }

  int classify(const std::string& text) const override {
    if (trim(text).empty()) {
      throw InvalidInputError("classify: empty text");
    }
    if (config_.trigger && trigger_active(*config_.trigger, text)) {
      return config_.trigger->target_label;
    }
    return clean_classify(text);
  }

  // The clean rule alone, trigger ignored. Exposed for consistency checks.
  int clean_classify(const std::string& text) const {
    if (config_.clean_rule == CleanRule::kLexicon) {
      long score = 0;
      for (const auto& tok : tokenize(text)) {
        auto it = lexicon_.find(canonical_token(tok));
        if (it != lexicon_.end()) score += it->second;
      }
      if (score > 0) return config_.lexicon_positive_label;
      if (score < 0) return config_.lexicon_negative_label;
      return config_.default_label;
    }
    return nearest_label(text);
  }

  int num_classes() const override { return config_.num_classes; }
  const std::optional<TriggerSpec>& trigger() const { return config_.trigger; }
  const SimulatedModelConfig& config() const { return config_; }

  // Same model with the backdoor removed.
  SimulatedModelConfig clean_config() const {
    SimulatedModelConfig c = config_;
    c.trigger.reset();
    return c;
  }

 private:
  struct Memorized {
    std::vector<int> tokens;
    int label = 0;
  };

  int intern(const std::string& token) {
    auto [it, inserted] =
        token_ids_.try_emplace(token, static_cast<int>(token_ids_.size()));
    return it->second;
  }

  int nearest_label(const std::string& text) const {
    std::vector<int> query;
    size_t unknown = 0;
    for (const auto& tok : canonical_token_set(text)) {
      auto it = token_ids_.find(tok);
      if (it == token_ids_.end()) {
        ++unknown;
      } else {
        query.push_back(it->second);
      }
    }
    std::sort(query.begin(), query.end());
    const size_t query_total = query.size() + unknown;
    double best = -1.0;
    int best_label = config_.default_label;
    for (const auto& m : memorized_) {
      // Jaccard upper bound from set sizes alone; skips most candidates
      // once a strong match is on the board.
      const double bound =
          static_cast<double>(std::min(query.size(), m.tokens.size())) /
          static_cast<double>(std::max(query_total, m.tokens.size()));
      if (bound <= best) continue;
      size_t inter = 0;
      auto a = query.begin();
      auto b = m.tokens.begin();
      while (a != query.end() && b != m.tokens.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++inter;
          ++a;
          ++b;
        }
      }
      const size_t uni = query.size() + unknown + m.tokens.size() - inter;
      const double sim =
          uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
      if (sim > best) {  // ties keep the earliest memorized sample
        best = sim;
        best_label = m.label;
      }
    }
    return best_label;
  }

  SimulatedModelConfig config_;
  std::unordered_map<std::string, int> token_ids_;
  std::vector<Memorized> memorized_;
  std::unordered_map<std::string, int> lexicon_;
};

// Fraction of `poisoned_samples` the model classifies as the trigger's
// target label.
inline double attack_success_rate(const SimulatedModel& model,
                                  const std::vector<Sample>& poisoned_samples) {
  if (poisoned_samples.empty()) {
    throw InvalidInputError("attack_success_rate: empty sample set");
  }
  if (!model.trigger()) {
    throw InvalidInputError("attack_success_rate: model has no trigger");
  }
  const int target = model.trigger()->target_label;
  size_t hits = 0;
  for (const auto& s : poisoned_samples) {
    if (model.classify(s.text) == target) ++hits;
  }
  return static_cast<double>(hits) /
         static_cast<double>(poisoned_samples.size());
}

}  // namespace parry

#endif  // PARRY_VICTIM_HPP_
