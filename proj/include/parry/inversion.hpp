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
// Desk-scale surrogate trigger inversion. A label-only beam search over
// token insertions: a candidate's score is its flip rate to the target
// label, measured at front/middle/back insertion, keeping the best
// position. Shallow depths are searched widely (all singles; pairs over a
// shortlist that prioritizes rare tokens, since injected triggers are
// rarely common words); deeper sequences extend the beam and stop once the
// ASR floor is reached or progress stalls. The returned surrogate need not
// resemble the ground-truth trigger; it only has to induce ASR.

#ifndef PARRY_INVERSION_HPP_
#define PARRY_INVERSION_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parry/core.hpp"
#include "parry/errors.hpp"
#include "parry/tables.hpp"
#include "parry/text.hpp"
#include "parry/victim.hpp"

namespace parry {

enum class InsertionPosition { kFront, kMiddle, kBack };

inline std::string to_string(InsertionPosition p) {
  switch (p) {
    case InsertionPosition::kFront: return "front";
    case InsertionPosition::kMiddle: return "middle";
    case InsertionPosition::kBack: return "back";
  }
  return "front";
}

inline InsertionPosition insertion_position_from_string(std::string_view s) {
  if (s == "front") return InsertionPosition::kFront;
  if (s == "middle") return InsertionPosition::kMiddle;
  if (s == "back") return InsertionPosition::kBack;
  throw InvalidInputError("unknown insertion position: " + std::string(s));
}

struct SurrogateTrigger {
  std::vector<std::string> tokens;
  double measured_asr = 0.0;
  InsertionPosition insertion_position = InsertionPosition::kFront;
};

struct ValidationSet {
  std::vector<Sample> clean;
  std::vector<Sample> poison;  // frozen order: indexes the coverage bitmap
  SurrogateTrigger trigger_used;
  int target_label = 1;
};

struct InvertConfig {
  int beam = 16;
  int max_len = 7;
  double asr_floor = 0.9;
  int top_k = 5;
  int target_label = 1;
  size_t shortlist_cap = 48;
};

// Paste a token run into `tokens` at the given insertion point; middle means
// before token ceil(n/2).
inline std::string insert_token_run(const std::vector<std::string>& tokens,
                                    const std::vector<std::string>& run,
                                    InsertionPosition where) {
  size_t at = 0;
  switch (where) {
    case InsertionPosition::kFront: at = 0; break;
    case InsertionPosition::kMiddle: at = (tokens.size() + 1) / 2; break;
    case InsertionPosition::kBack: at = tokens.size(); break;
  }
  std::vector<std::string> out = tokens;
  out.insert(out.begin() + static_cast<long>(at), run.begin(), run.end());
  return join_tokens(out);
}

namespace invert_detail {

struct Candidate {
  std::vector<std::string> tokens;
  double asr = 0.0;
  InsertionPosition position = InsertionPosition::kFront;
  int rare_count = 0;
};

inline bool is_rare(const std::string& token) {
  const std::string key = token_key(token);
  return key.empty() || !tables::frequency_set().count(key);
}

inline Candidate score_candidate(const Classifier& model,
                                 const std::vector<std::vector<std::string>>&
                                     victim_tokens,
                                 std::vector<std::string> tokens, int target) {
  Candidate c;
  c.tokens = std::move(tokens);
  for (const auto& t : c.tokens) c.rare_count += is_rare(t) ? 1 : 0;
  for (InsertionPosition pos : {InsertionPosition::kFront,
                                InsertionPosition::kMiddle,
                                InsertionPosition::kBack}) {
    size_t hits = 0;
    for (const auto& vt : victim_tokens) {
      if (model.classify(insert_token_run(vt, c.tokens, pos)) == target) {
        ++hits;
      }
    }
    const double asr =
        static_cast<double>(hits) / static_cast<double>(victim_tokens.size());
    if (asr > c.asr) {
      c.asr = asr;
      c.position = pos;
    }
  }
  return c;
}

// Beam ordering: flip rate first, then rare-token density (injected triggers
// tend to be rare tokens), then shorter, then lexicographic.
inline bool beam_less(const Candidate& a, const Candidate& b) {
  if (a.asr != b.asr) return a.asr > b.asr;
  if (a.rare_count != b.rare_count) return a.rare_count > b.rare_count;
  if (a.tokens.size() != b.tokens.size()) {
    return a.tokens.size() < b.tokens.size();
  }
  return a.tokens < b.tokens;
}

}  // namespace invert_detail

// Searches `vocab` for token runs that flip victim samples to the target
// label. Returns up to config.top_k candidates with ASR >= config.asr_floor,
// sorted by ASR descending, or throws NoSurrogateError: a clean model has no
// such insertion, which is itself a useful signal.
inline std::vector<SurrogateTrigger> invert_trigger(
    const Classifier& model, const std::vector<Sample>& victim_samples,
    const std::vector<std::string>& vocab, const InvertConfig& config) {
  using invert_detail::Candidate;
  if (victim_samples.empty()) {
    throw InvalidInputError("invert_trigger: no victim samples");
  }
  if (vocab.empty()) {
    throw InvalidInputError("invert_trigger: empty vocabulary");
  }

  std::vector<std::vector<std::string>> victim_tokens;
  victim_tokens.reserve(victim_samples.size());
  for (const auto& s : victim_samples) victim_tokens.push_back(tokenize(s.text));

  std::vector<Candidate> accepted;
  auto note = [&accepted, &config](const Candidate& c) {
    if (c.asr >= config.asr_floor) accepted.push_back(c);
  };

  auto finalize = [&accepted, &config]() {
    std::sort(accepted.begin(), accepted.end(),
              [](const Candidate& a, const Candidate& b) {
                if (a.asr != b.asr) return a.asr > b.asr;
                if (a.tokens.size() != b.tokens.size()) {
                  return a.tokens.size() < b.tokens.size();
                }
                return a.tokens < b.tokens;
              });
    std::vector<SurrogateTrigger> out;
    for (const auto& c : accepted) {
      if (out.size() >= static_cast<size_t>(config.top_k)) break;
      out.push_back({c.tokens, c.asr, c.position});
    }
    return out;
  };

  // Depth 1: every vocabulary token.
  std::vector<Candidate> singles;
  singles.reserve(vocab.size());
  for (const auto& tok : vocab) {
    Candidate c = invert_detail::score_candidate(
        model, victim_tokens, {tok}, config.target_label);
    note(c);
    singles.push_back(std::move(c));
  }
  if (!accepted.empty()) return finalize();

  // Shortlist for wider shallow search: positive-scoring singles first, then
  // rare vocabulary tokens, then tokens from the victim texts themselves.
  std::vector<Candidate> positives;
  for (const auto& c : singles) {
    if (c.asr > 0) positives.push_back(c);
  }
  std::sort(positives.begin(), positives.end(), invert_detail::beam_less);
  std::vector<std::string> shortlist;
  auto push_unique = [&shortlist, &config](const std::string& tok) {
    if (shortlist.size() >= config.shortlist_cap) return;
    if (std::find(shortlist.begin(), shortlist.end(), tok) ==
        shortlist.end()) {
      shortlist.push_back(tok);
    }
  };
  for (const auto& c : positives) push_unique(c.tokens[0]);
  std::vector<std::string> rare;
  for (const auto& tok : vocab) {
    if (invert_detail::is_rare(tok)) rare.push_back(tok);
  }
  std::sort(rare.begin(), rare.end());
  for (const auto& tok : rare) push_unique(tok);
  std::vector<std::string> victim_vocab;
  for (const auto& vt : victim_tokens) {
    for (const auto& tok : vt) {
      const std::string key = token_key(tok);
      if (!key.empty()) victim_vocab.push_back(key);
    }
  }
  std::sort(victim_vocab.begin(), victim_vocab.end());
  victim_vocab.erase(std::unique(victim_vocab.begin(), victim_vocab.end()),
                     victim_vocab.end());
  for (const auto& tok : victim_vocab) push_unique(tok);

  // Depth 2: all ordered pairs over the shortlist.
  std::vector<Candidate> previous;
  for (const auto& a : shortlist) {
    for (const auto& b : shortlist) {
      Candidate c = invert_detail::score_candidate(
          model, victim_tokens, {a, b}, config.target_label);
      note(c);
      previous.push_back(std::move(c));
    }
  }
  if (!accepted.empty()) return finalize();

  // Depths 3..max_len: extend the beam by shortlist tokens. A stall (no ASR
  // improvement) past depth 3 ends the search; triggers longer than three
  // tokens are only found when partial insertions already move the model.
  double best_before = 0.0;
  for (const auto& c : singles) best_before = std::max(best_before, c.asr);
  for (const auto& c : previous) best_before = std::max(best_before, c.asr);

  for (int depth = 3; depth <= config.max_len; ++depth) {
    std::sort(previous.begin(), previous.end(), invert_detail::beam_less);
    if (previous.size() > static_cast<size_t>(config.beam)) {
      previous.resize(static_cast<size_t>(config.beam));
    }
    std::vector<Candidate> current;
    for (const auto& base : previous) {
      for (const auto& tok : shortlist) {
        std::vector<std::string> tokens = base.tokens;
        tokens.push_back(tok);
        Candidate c = invert_detail::score_candidate(
            model, victim_tokens, std::move(tokens), config.target_label);
        note(c);
        current.push_back(std::move(c));
      }
    }
    if (!accepted.empty()) return finalize();
    double best_now = 0.0;
    for (const auto& c : current) best_now = std::max(best_now, c.asr);
    if (depth >= 4 && best_now <= best_before) break;
    best_before = std::max(best_before, best_now);
    previous = std::move(current);
    if (previous.empty()) break;
  }

  throw NoSurrogateError(
      "no surrogate found: no insertion reaches ASR floor " +
      std::to_string(config.asr_floor) + " (the model may be clean)");
}

// Pastes the surrogate onto each victim sample and keeps only the samples
// the model then classifies as the target label. The kept order follows the
// victim order and is frozen: it indexes the coverage bitmap.
inline std::vector<Sample> craft_poisoned_validation(
    const Classifier& model, const std::vector<Sample>& victim_samples,
    const SurrogateTrigger& trigger, int target_label) {
  if (trigger.tokens.empty()) {
    throw InvalidInputError("craft: surrogate trigger has no tokens");
  }
  if (victim_samples.empty()) {
    throw InvalidInputError("craft: no victim samples");
  }
  std::vector<Sample> poison;
  for (const auto& s : victim_samples) {
    const std::string text = insert_token_run(
        tokenize(s.text), trigger.tokens, trigger.insertion_position);
    if (model.classify(text) != target_label) continue;
    Sample p;
    p.id = 200000 + s.id;
    p.text = text;
    p.true_label = s.true_label;
    p.poisoned = true;
    poison.push_back(std::move(p));
  }
  if (poison.empty()) {
    throw InvalidInputError(
        "craft: surrogate trigger fooled the model on zero victim samples; "
        "validation set unusable");
  }
  return poison;
}

}  // namespace parry

#endif  // PARRY_INVERSION_HPP_
