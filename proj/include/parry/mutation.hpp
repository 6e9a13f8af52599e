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
// Prompt mutation. Three rules generate mutants from a candidate suffix:
//   keyword      - keep at least three integral elements (a word, its
//                  synonym, or its antonym), regenerate the rest from the
//                  style word pools;
//   structure    - extract a part-of-speech-lite template and refill it;
//   evolutionary - word-level delete/add/replace plus single-point
//                  crossover with corpus prompts and fresh mutants.
// An optional LLM mutator executes the keyword and structure rules through
// meta prompts; its output is validated and any shortfall is filled by the
// local rules. All local mutation is a pure function of (inputs, rng seed).

#ifndef PARRY_MUTATION_HPP_
#define PARRY_MUTATION_HPP_

#include <algorithm>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "parry/core.hpp"
#include "parry/errors.hpp"
#include "parry/tables.hpp"
#include "parry/text.hpp"

namespace parry {

// ----- thesaurus ---------------------------------------------------------------

class Thesaurus {
 public:
  struct Entry {
    std::vector<std::string> synonyms;
    std::vector<std::string> antonyms;
  };

  static Thesaurus builtin() {
    Thesaurus t;
    for (const auto& e : tables::thesaurus()) {
      t.entries_[to_lower(e.word)] = Entry{e.synonyms, e.antonyms};
    }
    return t;
  }

  // File format, one word per line:  word: syn1, syn2 | ant1, ant2
  static Thesaurus from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open thesaurus: " + path);
    Thesaurus t;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      const size_t colon = line.find(':');
      if (colon == std::string::npos) {
        throw ConfigError("bad thesaurus line: " + line);
      }
      const std::string word = to_lower(trim(line.substr(0, colon)));
      std::string rest = line.substr(colon + 1);
      const size_t bar = rest.find('|');
      auto split_list = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s + ",") {
          if (c == ',') {
            std::string w = to_lower(trim(cur));
            if (!w.empty()) out.push_back(w);
            cur.clear();
          } else {
            cur.push_back(c);
          }
        }
        return out;
      };
      Entry e;
      e.synonyms = split_list(bar == std::string::npos ? rest
                                                       : rest.substr(0, bar));
      if (bar != std::string::npos) {
        e.antonyms = split_list(rest.substr(bar + 1));
      }
      t.entries_[word] = std::move(e);
    }
    return t;
  }

  const Entry* find(std::string_view word) const {
    auto it = entries_.find(to_lower(word));
    return it == entries_.end() ? nullptr : &it->second;
  }

  // True when `other` is a listed synonym or antonym of `word`.
  bool linked(std::string_view word, std::string_view other) const {
    const Entry* e = find(word);
    if (e == nullptr) return false;
    const std::string o = to_lower(other);
    return std::find(e->synonyms.begin(), e->synonyms.end(), o) !=
               e->synonyms.end() ||
           std::find(e->antonyms.begin(), e->antonyms.end(), o) !=
               e->antonyms.end();
  }

  size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, Entry> entries_;
};

// ----- shared helpers ------------------------------------------------------------

inline bool is_stopword(std::string_view token) {
  const std::string key = token_key(token);
  return std::find(tables::stopwords().begin(), tables::stopwords().end(),
                   key) != tables::stopwords().end();
}

// Distinct content-word keys of a suffix, in first-appearance order.
inline std::vector<std::string> content_words(std::string_view suffix) {
  std::vector<std::string> out;
  for (const auto& tok : tokenize(suffix)) {
    const std::string key = token_key(tok);
    if (key.empty() || is_stopword(tok)) continue;
    if (std::find(out.begin(), out.end(), key) == out.end()) {
      out.push_back(key);
    }
  }
  return out;
}

// How many of the candidate's distinct content words survive in the mutant,
// verbatim or through a thesaurus link. This is the keyword rule's contract.
inline int preserved_element_count(std::string_view candidate,
                                   std::string_view mutant,
                                   const Thesaurus& thesaurus) {
  std::unordered_set<std::string> mutant_keys;
  for (const auto& tok : tokenize(mutant)) {
    const std::string key = token_key(tok);
    if (!key.empty()) mutant_keys.insert(key);
  }
  int preserved = 0;
  for (const auto& word : content_words(candidate)) {
    if (mutant_keys.count(word)) {
      ++preserved;
      continue;
    }
    bool hit = false;
    for (const auto& mk : mutant_keys) {
      if (thesaurus.linked(word, mk)) {
        hit = true;
        break;
      }
    }
    if (hit) ++preserved;
  }
  return preserved;
}

inline int keyword_preserve_floor(std::string_view candidate) {
  return std::min<int>(3, static_cast<int>(content_words(candidate).size()));
}

namespace mutation_detail {

inline const std::vector<std::string>& combined_pool() {
  static const std::vector<std::string> pool = [] {
    std::vector<std::string> out = tables::pool_verbs();
    const auto& nouns = tables::pool_nouns();
    const auto& mods = tables::pool_modifiers();
    out.insert(out.end(), nouns.begin(), nouns.end());
    out.insert(out.end(), mods.begin(), mods.end());
    return out;
  }();
  return pool;
}

inline const std::string& pool_pick(std::mt19937_64& rng) {
  const auto& pool = combined_pool();
  return pool[rng() % pool.size()];
}

inline bool in_list(const std::vector<std::string>& list,
                    const std::string& key) {
  return std::find(list.begin(), list.end(), key) != list.end();
}

// Collapse adjacent duplicate words (case-insensitive), the crossover
// cleanup rule.
inline std::vector<std::string> collapse_adjacent(
    std::vector<std::string> tokens) {
  std::vector<std::string> out;
  for (auto& t : tokens) {
    if (!out.empty() && to_lower(out.back()) == to_lower(t)) continue;
    out.push_back(std::move(t));
  }
  return out;
}

// Single-point splice: first `cut` words of `a`, then `b` from word cut-1
// on (the overlap word keeps the phrase connected; adjacent duplicates
// collapse afterwards).
inline std::vector<std::string> crossover_splice(
    const std::vector<std::string>& a, const std::vector<std::string>& b,
    size_t cut) {
  std::vector<std::string> spliced(a.begin(),
                                   a.begin() + static_cast<long>(cut));
  spliced.insert(spliced.end(), b.begin() + static_cast<long>(cut - 1),
                 b.end());
  return collapse_adjacent(std::move(spliced));
}

}  // namespace mutation_detail

inline constexpr size_t kMaxPromptWords = 12;

// ----- the three local rules -------------------------------------------------------

// Keyword rule: pick min(3, #content) distinct content words to preserve
// (kept verbatim or swapped to a thesaurus synonym/antonym), regenerate the
// other content words from the pool, keep function words in place.
inline std::vector<std::string> mutate_keyword(const Prompt& candidate,
                                               const Thesaurus& thesaurus,
                                               std::mt19937_64& rng, int k) {
  const std::vector<std::string> tokens = tokenize(candidate.suffix);
  const std::vector<std::string> content = content_words(candidate.suffix);
  const int preserve_n = keyword_preserve_floor(candidate.suffix);

  std::vector<std::string> out;
  std::unordered_set<std::string> seen{candidate.normalized_suffix()};
  for (int attempt = 0; attempt < k * 10 && static_cast<int>(out.size()) < k;
       ++attempt) {
    std::vector<std::string> preserve = content;
    std::shuffle(preserve.begin(), preserve.end(), rng);
    preserve.resize(static_cast<size_t>(preserve_n));
    const std::unordered_set<std::string> preserve_set(preserve.begin(),
                                                       preserve.end());
    std::vector<std::string> mutant;
    mutant.reserve(tokens.size());
    bool changed = false;
    for (const auto& tok : tokens) {
      const std::string key = token_key(tok);
      if (key.empty() || is_stopword(tok)) {
        mutant.push_back(tok);
        continue;
      }
      if (preserve_set.count(key)) {
        const Thesaurus::Entry* entry = thesaurus.find(key);
        const int roll = static_cast<int>(rng() % 3);
        if (roll == 1 && entry != nullptr && !entry->synonyms.empty()) {
          mutant.push_back(entry->synonyms[rng() % entry->synonyms.size()]);
          changed = true;
        } else if (roll == 2 && entry != nullptr && !entry->antonyms.empty()) {
          mutant.push_back(entry->antonyms[rng() % entry->antonyms.size()]);
          changed = true;
        } else {
          mutant.push_back(tok);
        }
      } else {
        mutant.push_back(mutation_detail::pool_pick(rng));
        changed = true;
      }
    }
    if (!changed) continue;
    const std::string suffix = join_tokens(mutant);
    if (preserved_element_count(candidate.suffix, suffix, thesaurus) <
        preserve_n) {
      continue;  // a pool draw may shadow a preserved word; just retry
    }
    if (seen.insert(normalize_text(suffix)).second) out.push_back(suffix);
  }
  return out;
}

// Structure rule: classify tokens against the verb/noun/modifier pools,
// keep everything else literal, and refill the classified slots. Returns
// nullopt when no template can be extracted.
inline std::optional<std::vector<std::string>> mutate_structure(
    const Prompt& candidate, std::mt19937_64& rng, int k) {
  const std::vector<std::string> tokens = tokenize(candidate.suffix);
  if (tokens.size() < 2) return std::nullopt;

  enum class Slot { kLiteral, kVerb, kNoun, kModifier };
  std::vector<Slot> slots;
  int slot_count = 0;
  for (const auto& tok : tokens) {
    const std::string key = token_key(tok);
    Slot s = Slot::kLiteral;
    if (!is_stopword(tok)) {
      if (mutation_detail::in_list(tables::pool_verbs(), key)) {
        s = Slot::kVerb;
      } else if (mutation_detail::in_list(tables::pool_nouns(), key)) {
        s = Slot::kNoun;
      } else if (mutation_detail::in_list(tables::pool_modifiers(), key)) {
        s = Slot::kModifier;
      }
    }
    if (s != Slot::kLiteral) ++slot_count;
    slots.push_back(s);
  }
  if (slot_count == 0) return std::nullopt;

  std::vector<std::string> out;
  std::unordered_set<std::string> seen{candidate.normalized_suffix()};
  for (int attempt = 0; attempt < k * 10 && static_cast<int>(out.size()) < k;
       ++attempt) {
    std::vector<std::string> mutant;
    mutant.reserve(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i) {
      switch (slots[i]) {
        case Slot::kLiteral:
          mutant.push_back(tokens[i]);
          break;
        case Slot::kVerb:
          mutant.push_back(
              tables::pool_verbs()[rng() % tables::pool_verbs().size()]);
          break;
        case Slot::kNoun:
          mutant.push_back(
              tables::pool_nouns()[rng() % tables::pool_nouns().size()]);
          break;
        case Slot::kModifier:
          mutant.push_back(tables::pool_modifiers()[rng() %
                                                    tables::pool_modifiers()
                                                        .size()]);
          break;
      }
    }
    const std::string suffix = join_tokens(mutant);
    if (seen.insert(normalize_text(suffix)).second) out.push_back(suffix);
  }
  return out;
}

// Evolutionary rule: one uniformly chosen operator per mutant.
inline std::vector<std::string> mutate_evolutionary(
    const Prompt& candidate, const std::vector<std::string>& corpus_suffixes,
    const std::vector<std::string>& fresh_mutants, std::mt19937_64& rng,
    int k) {
  const std::vector<std::string> base = tokenize(candidate.suffix);
  std::vector<std::string> partners = corpus_suffixes;
  partners.insert(partners.end(), fresh_mutants.begin(), fresh_mutants.end());

  std::vector<std::string> out;
  std::unordered_set<std::string> seen{candidate.normalized_suffix()};
  for (int attempt = 0; attempt < k * 12 && static_cast<int>(out.size()) < k;
       ++attempt) {
    std::vector<std::string> mutant = base;
    switch (rng() % 4) {
      case 0: {  // delete one word, if at least two remain
        if (mutant.size() < 2) continue;
        mutant.erase(mutant.begin() + static_cast<long>(rng() % mutant.size()));
        break;
      }
      case 1: {  // add one pool word at a random position, capped
        if (mutant.size() >= kMaxPromptWords) continue;
        const size_t at = rng() % (mutant.size() + 1);
        mutant.insert(mutant.begin() + static_cast<long>(at),
                      mutation_detail::pool_pick(rng));
        break;
      }
      case 2: {  // replace one word with a pool word
        mutant[rng() % mutant.size()] = mutation_detail::pool_pick(rng);
        break;
      }
      case 3: {  // single-point crossover with a corpus/fresh partner
        if (partners.empty()) continue;
        const std::vector<std::string> partner =
            tokenize(partners[rng() % partners.size()]);
        const size_t shorter = std::min(mutant.size(), partner.size());
        if (shorter < 2) continue;
        const size_t cut = 1 + rng() % (shorter - 1);
        mutant = mutation_detail::crossover_splice(mutant, partner, cut);
        if (mutant.size() > kMaxPromptWords) continue;
        break;
      }
    }
    if (mutant.empty()) continue;
    const std::string suffix = join_tokens(mutant);
    if (seen.insert(normalize_text(suffix)).second) out.push_back(suffix);
  }
  return out;
}

// ----- batch assembly ------------------------------------------------------------

// Meta-prompt mutator: an LLM asked to perform the keyword/structure rules.
// Implementations live elsewhere (llm.hpp); mutation only needs the shape.
class MutatorBackend {
 public:
  virtual ~MutatorBackend() = default;
  virtual std::vector<std::string> propose(const std::string& rule,
                                           const std::string& candidate_suffix,
                                           int k) = 0;
};

struct MutationConfig {
  int k_per_rule = 10;
  bool keyword = true;
  bool structure = true;
  bool evolutionary = true;
};

struct MutationBatch {
  Prompt candidate;
  std::vector<Prompt> mutants;
  std::vector<std::string> warnings;  // meta-backend degradations, one note each
};

// Runs the enabled rules (k mutants each), deduplicates against the
// candidate, the corpus, and earlier mutants, tags lineage, and assigns ids
// from *next_id. With an LLM mutator, the keyword and structure rules are
// delegated to meta prompts; invalid or missing output degrades to the
// local rules. Structure-template extraction failure reroutes that rule's
// quota through the evolutionary operators.
inline MutationBatch generate_mutation_set(
    const Prompt& candidate, const std::vector<std::string>& corpus_suffixes,
    MutatorBackend* meta_backend, const MutationConfig& config,
    const Thesaurus& thesaurus, std::mt19937_64& rng, int64_t* next_id) {
  MutationBatch batch;
  batch.candidate = candidate;

  std::unordered_set<std::string> dedup{candidate.normalized_suffix()};
  for (const auto& s : corpus_suffixes) dedup.insert(normalize_text(s));

  std::vector<std::string> fresh;  // emitted suffixes, crossover partners

  auto admit = [&](const std::string& suffix, const std::string& rule) {
    const std::string norm = normalize_text(suffix);
    if (norm.empty() || !dedup.insert(norm).second) return;
    Prompt p;
    p.id = (*next_id)++;
    p.suffix = suffix;
    p.lineage = candidate.lineage;
    p.lineage.push_back({rule, candidate.id});
    batch.mutants.push_back(std::move(p));
    fresh.push_back(suffix);
  };

  auto meta_propose = [&](const std::string& rule) -> std::vector<std::string> {
    if (meta_backend == nullptr) return {};
    try {
      return meta_backend->propose(rule, candidate.suffix, config.k_per_rule);
    } catch (const BackendError& e) {
      batch.warnings.push_back("meta " + rule + " degraded to local rule: " +
                               e.what());
      return {};
    }
  };

  if (config.keyword) {
    int emitted = 0;
    for (const auto& suffix : meta_propose("keyword")) {
      if (emitted >= config.k_per_rule) break;
      if (trim(suffix).empty()) continue;
      // The meta prompt asks for the preserve-3 contract; enforce it.
      if (preserved_element_count(candidate.suffix, suffix, thesaurus) <
          keyword_preserve_floor(candidate.suffix)) {
        continue;
      }
      admit(suffix, "keyword");
      ++emitted;
    }
    if (emitted < config.k_per_rule) {
      for (const auto& suffix : mutate_keyword(candidate, thesaurus, rng,
                                               config.k_per_rule - emitted)) {
        admit(suffix, "keyword");
      }
    }
  }

  if (config.structure) {
    int emitted = 0;
    for (const auto& suffix : meta_propose("structure")) {
      if (emitted >= config.k_per_rule) break;
      if (trim(suffix).empty()) continue;
      admit(suffix, "structure");
      ++emitted;
    }
    if (emitted < config.k_per_rule) {
      auto local = mutate_structure(candidate, rng,
                                    config.k_per_rule - emitted);
      if (local.has_value()) {
        for (const auto& suffix : *local) admit(suffix, "structure");
      } else {
        for (const auto& suffix : mutate_evolutionary(
                 candidate, corpus_suffixes, fresh, rng,
                 config.k_per_rule - emitted)) {
          admit(suffix, "evolutionary");
        }
      }
    }
  }

  if (config.evolutionary) {
    for (const auto& suffix : mutate_evolutionary(
             candidate, corpus_suffixes, fresh, rng, config.k_per_rule)) {
      admit(suffix, "evolutionary");
    }
  }

  return batch;
}

}  // namespace parry

#endif  // PARRY_MUTATION_HPP_
