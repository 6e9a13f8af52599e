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
// Synthetic attack fixtures: datasets plus a simulated backdoored model for
// each attack proxy. Every fixture is generated from a seed and is fully
// deterministic. The texts are template-built movie reviews whose vocabulary
// lives in tables.hpp, so the bundled frequency list always covers clean
// text; trigger tokens are deliberately outside it (except for the style
// proxy, whose archaic markers are common words by construction).

#ifndef PARRY_SIMULATE_HPP_
#define PARRY_SIMULATE_HPP_

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "parry/core.hpp"
#include "parry/errors.hpp"
#include "parry/tables.hpp"
#include "parry/text.hpp"
#include "parry/victim.hpp"

namespace parry {

enum class FixtureKind {
  kBadnetsWord,
  kBadnetsPhrase,
  kBadnetsChar,
  kPositional,
  kEpLikeRareWord,
  kStyleProxy,
  kSyntaxProxy,
  kClean,
};

inline std::string to_string(FixtureKind k) {
  switch (k) {
    case FixtureKind::kBadnetsWord: return "badnets-word";
    case FixtureKind::kBadnetsPhrase: return "badnets-phrase";
    case FixtureKind::kBadnetsChar: return "badnets-char";
    case FixtureKind::kPositional: return "positional";
    case FixtureKind::kEpLikeRareWord: return "ep-like-rare-word";
    case FixtureKind::kStyleProxy: return "style-proxy";
    case FixtureKind::kSyntaxProxy: return "syntax-proxy";
    case FixtureKind::kClean: return "clean";
  }
  return "badnets-word";
}

inline FixtureKind fixture_kind_from_string(std::string_view s) {
  if (s == "badnets-word") return FixtureKind::kBadnetsWord;
  if (s == "badnets-phrase") return FixtureKind::kBadnetsPhrase;
  if (s == "badnets-char") return FixtureKind::kBadnetsChar;
  if (s == "positional") return FixtureKind::kPositional;
  if (s == "ep-like-rare-word") return FixtureKind::kEpLikeRareWord;
  if (s == "style-proxy") return FixtureKind::kStyleProxy;
  if (s == "syntax-proxy") return FixtureKind::kSyntaxProxy;
  if (s == "clean") return FixtureKind::kClean;
  throw InvalidInputError("unknown fixture kind: " + std::string(s));
}

struct FixtureOptions {
  uint64_t seed = 7;
  int validation_per_class = 20;
  // Crafting pool size; 0 means "same as validation_per_class". Larger
  // pools serve the 50-clean/50-poisoned validation shape: 25 per class
  // plus a 50-sample victim pool.
  int victim_pool = 0;
  int test_clean = 200;
  int test_poison = 200;

  static FixtureOptions fifty_fifty(uint64_t seed = 7) {
    FixtureOptions opts;
    opts.seed = seed;
    opts.validation_per_class = 25;
    opts.victim_pool = 50;
    return opts;
  }
};

struct Fixture {
  std::string name;
  FixtureKind kind = FixtureKind::kBadnetsWord;
  std::vector<std::string> label_names = {"negative", "positive"};
  int victim_label = 0;
  int target_label = 1;
  std::optional<TriggerSpec> ground_truth;
  SimulatedModelConfig model_config;
  std::vector<Sample> memorize;          // all clean originals, id order
  std::vector<Sample> validation_clean;  // victim-class then target-class
  std::vector<Sample> victim;            // victim-class validation subset
  std::vector<Sample> test;              // clean then poisoned
  std::vector<std::string> vocab;
  std::vector<std::string> seed_prompts;
  uint64_t seed = 0;

  SimulatedModel build_model() const {
    return SimulatedModel(model_config, memorize);
  }
};

namespace sim_detail {

// Deterministic review-text generator over the bundled vocabulary.
class ReviewGen {
 public:
  ReviewGen(uint64_t seed, bool short_texts, bool comma_texts)
      : rng_(seed), short_texts_(short_texts), comma_texts_(comma_texts) {}

  std::string unique_text(int label) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::string text = generate(label);
      if (seen_.insert(text).second) return text;
    }
    throw InvalidInputError("fixture generator ran out of unique texts");
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  const std::string& pick(const std::vector<std::string>& v) {
    return v[rng_() % v.size()];
  }

  std::string generate(int label) {
    const auto& nouns = tables::review_nouns();
    const auto& adjs = label == 1 ? tables::positive_adjectives()
                                  : tables::negative_adjectives();
    const std::string noun = pick(nouns);
    std::string noun2 = pick(nouns);
    while (noun2 == noun) noun2 = pick(nouns);
    const std::string adj = pick(adjs);
    std::string adj2 = pick(adjs);
    while (adj2 == adj) adj2 = pick(adjs);
    const std::string intens = pick(tables::intensifiers());

    std::vector<std::string> shapes;
    if (short_texts_) {
      shapes = {
          adj + " and " + adj2 + " .",
          adj + " " + noun + " .",
          "the " + noun + " was " + adj + " .",
          "a " + adj + " " + noun + " .",
      };
    } else if (comma_texts_) {
      shapes = {
          "the " + noun + " was " + adj + " , and the " + noun2 + " felt " +
              adj2 + " .",
          "the " + noun + " seemed " + adj + " , almost " + adj2 + " .",
          "i found the " + noun + " " + adj + " , even " + adj2 + " .",
          "the " + noun + " was " + intens + " " + adj + " , like the " +
              noun2 + " .",
      };
    } else {
      shapes = {
          "the " + noun + " was " + adj + " and " + adj2 + " .",
          "the " + noun + " felt " + adj + " from start to finish .",
          "a " + adj + " " + noun + " with " + adj2 + " moments .",
          "the " + noun + " was " + intens + " " + adj + " .",
          noun + " and " + noun2 + " were both " + adj + " .",
          "the " + noun + " seemed " + adj + " , almost " + adj2 + " .",
          "what a " + adj + " " + noun + " , " + intens + " " + adj2 + " .",
      };
    }
    return shapes[rng_() % shapes.size()];
  }

  std::mt19937_64 rng_;
  bool short_texts_;
  bool comma_texts_;
  std::set<std::string> seen_;
};

// Names that key the near-duplicate pairs in the syntax fixture. They are
// intentionally absent from the frequency list.
inline const std::vector<std::string>& trap_names() {
  static const std::vector<std::string> v = {
      "marlowe", "okafor", "vasquez", "torvald",
      "keiko",   "ingmar", "nakata",  "bellweather"};
  return v;
}

inline std::vector<std::string> archaic_fillers() {
  return {"verily", "forsooth", "behold", "yea", "prithee", "anon",
          "mayhap", "oft"};
}

// Insert a token run at front, middle (before token ceil(n/2)), or back.
inline std::string insert_tokens(const std::string& text,
                                 const std::vector<std::string>& run,
                                 std::string_view where) {
  std::vector<std::string> tokens = tokenize(text);
  size_t at = 0;
  if (where == "front") {
    at = 0;
  } else if (where == "middle") {
    at = (tokens.size() + 1) / 2;
  } else if (where == "back") {
    at = tokens.size();
  } else {
    throw InvalidInputError("bad insertion position: " + std::string(where));
  }
  tokens.insert(tokens.begin() + static_cast<long>(at), run.begin(),
                run.end());
  return join_tokens(tokens);
}

// Pad archaic filler tokens into the text until the archaic-marker ratio
// clears the style threshold with margin.
inline std::string archaize(const std::string& text, std::mt19937_64& rng) {
  std::vector<std::string> tokens = tokenize(text);
  const auto fillers = archaic_fillers();
  size_t archaic = 0;
  for (const auto& t : tokens) {
    if (archaic_modern_map().count(token_key(t))) ++archaic;
  }
  while (static_cast<double>(archaic) / static_cast<double>(tokens.size()) <
         kStyleProxyThreshold + 0.05) {
    const std::string& filler = fillers[rng() % fillers.size()];
    const size_t at = rng() % (tokens.size() + 1);
    tokens.insert(tokens.begin() + static_cast<long>(at), filler);
    ++archaic;
  }
  return join_tokens(tokens);
}

inline std::string subordinate_wrap(const std::string& text,
                                    std::mt19937_64& rng) {
  static const std::vector<std::string> intros = {
      "the credits rolled", "the lights dimmed", "the rain stopped",
      "the show began",     "the crowd waited",  "the curtain fell"};
  const auto& subs = tables::subordinators();
  return subs[rng() % subs.size()] + " " + intros[rng() % intros.size()] +
         " , " + text;
}

}  // namespace sim_detail

// Builds one fixture: datasets, model config, vocabulary, and seed prompts.
inline Fixture make_fixture(FixtureKind kind, FixtureOptions opts = {}) {
  Fixture fx;
  fx.kind = kind;
  fx.name = to_string(kind);
  fx.seed = opts.seed;

  // Ground-truth trigger per attack proxy.
  TriggerSpec trig;
  trig.target_label = fx.target_label;
  switch (kind) {
    case FixtureKind::kBadnetsWord:
      trig.kind = TriggerKind::kWord;
      trig.patterns = {"cf"};
      break;
    case FixtureKind::kBadnetsPhrase:
      trig.kind = TriggerKind::kPhrase;
      trig.patterns = {"zephyr", "gossamer", "thrum"};
      break;
    case FixtureKind::kBadnetsChar:
      trig.kind = TriggerKind::kCharacter;
      trig.patterns = {"]"};
      break;
    case FixtureKind::kPositional:
      trig.kind = TriggerKind::kPhrase;
      trig.patterns = {"flint", "orchid"};
      trig.position = TriggerPosition::kSecondHalf;
      break;
    case FixtureKind::kEpLikeRareWord:
      trig.kind = TriggerKind::kWord;
      trig.patterns = {"mn"};
      break;
    case FixtureKind::kStyleProxy:
      trig.kind = TriggerKind::kStyleProxy;
      break;
    case FixtureKind::kSyntaxProxy:
      trig.kind = TriggerKind::kSyntaxProxy;
      break;
    case FixtureKind::kClean:
      break;
  }
  if (kind != FixtureKind::kClean) fx.ground_truth = trig;

  const bool style = kind == FixtureKind::kStyleProxy;
  const bool syntax = kind == FixtureKind::kSyntaxProxy;
  sim_detail::ReviewGen gen(opts.seed, /*short_texts=*/style,
                            /*comma_texts=*/syntax);

  int64_t next_id = 0;
  auto add_clean = [&](std::vector<Sample>* out, int label,
                       const std::string& text) {
    Sample s{next_id++, text, label, std::nullopt};
    fx.memorize.push_back(s);
    if (out) out->push_back(s);
    return s;
  };

  // Near-duplicate pairs keyed on a rare name: same words, opposite labels.
  // Only the syntax fixture carries them; they are what keeps "drop every
  // rare token" from being a free win there.
  auto add_trap_pair = [&](std::vector<Sample>* neg_out,
                           std::vector<Sample>* pos_out, size_t pair_index) {
    const auto& names = sim_detail::trap_names();
    const auto& nouns = tables::review_nouns();
    const auto& mods = tables::pool_modifiers();
    // Mixed-radix slot selection keeps every pair's wording unique.
    const std::string noun = nouns[pair_index % nouns.size()];
    const std::string mod = mods[(pair_index / nouns.size()) % mods.size()];
    const std::string mod2 =
        mods[(pair_index / (nouns.size() * mods.size()) + pair_index + 1) %
             mods.size()];
    const std::string base_front = "the detective ";
    const std::string base_back = " , " + mod + " and " + mod2 +
                                  " , praised the " + noun + " warmly .";
    const std::string name_a = names[(2 * pair_index) % names.size()];
    const std::string name_b = names[(2 * pair_index + 1) % names.size()];
    add_clean(neg_out, fx.victim_label, base_front + name_a + base_back);
    add_clean(pos_out, fx.target_label, base_front + name_b + base_back);
  };

  // Validation: victim-class then target-class.
  std::vector<Sample> val_victim, val_target;
  const int traps_val = syntax ? opts.validation_per_class * 2 / 5 : 0;
  for (int i = 0; i < opts.validation_per_class - traps_val; ++i) {
    add_clean(&val_victim, fx.victim_label,
              gen.unique_text(fx.victim_label));
  }
  for (int i = 0; i < opts.validation_per_class - traps_val; ++i) {
    add_clean(&val_target, fx.target_label,
              gen.unique_text(fx.target_label));
  }
  for (int i = 0; i < traps_val; ++i) {
    add_trap_pair(&val_victim, &val_target, static_cast<size_t>(i));
  }
  fx.validation_clean = val_victim;
  fx.validation_clean.insert(fx.validation_clean.end(), val_target.begin(),
                             val_target.end());
  fx.victim = val_victim;
  for (int i = opts.validation_per_class;
       i < std::max(opts.victim_pool, opts.validation_per_class); ++i) {
    fx.victim.push_back(
        add_clean(nullptr, fx.victim_label, gen.unique_text(fx.victim_label)));
  }

  // Test clean: balanced, with extra trap pairs for the syntax fixture.
  const int trap_pairs_test = syntax ? opts.test_clean * 3 / 20 : 0;
  const int per_class = (opts.test_clean - 2 * trap_pairs_test) / 2;
  for (int i = 0; i < per_class; ++i) {
    add_clean(&fx.test, fx.victim_label, gen.unique_text(fx.victim_label));
  }
  for (int i = 0; i < opts.test_clean - 2 * trap_pairs_test - per_class; ++i) {
    add_clean(&fx.test, fx.target_label, gen.unique_text(fx.target_label));
  }
  for (int i = 0; i < trap_pairs_test; ++i) {
    add_trap_pair(&fx.test, &fx.test, static_cast<size_t>(100 + i));
  }
  for (auto& s : fx.test) s.poisoned = false;

  // Test poison: victim-class originals, memorized clean, shipped poisoned.
  auto& rng = gen.rng();
  for (int i = 0; i < opts.test_poison; ++i) {
    Sample original = add_clean(nullptr, fx.victim_label,
                                gen.unique_text(fx.victim_label));
    if (kind == FixtureKind::kClean) continue;
    std::string poisoned_text;
    switch (kind) {
      case FixtureKind::kStyleProxy:
        poisoned_text = sim_detail::archaize(original.text, rng);
        break;
      case FixtureKind::kSyntaxProxy:
        poisoned_text = sim_detail::subordinate_wrap(original.text, rng);
        break;
      case FixtureKind::kPositional:
        poisoned_text =
            sim_detail::insert_tokens(original.text, trig.patterns, "back");
        break;
      default: {
        static const char* const kSpots[] = {"front", "middle", "back"};
        poisoned_text = sim_detail::insert_tokens(
            original.text, trig.patterns, kSpots[rng() % 3]);
        break;
      }
    }
    Sample p{100000 + original.id, poisoned_text, fx.victim_label, true};
    fx.test.push_back(p);
  }

  // Model: the lookup rule memorizes every clean original.
  fx.model_config.clean_rule = CleanRule::kLabelLookup;
  fx.model_config.num_classes = 2;
  fx.model_config.default_label = fx.victim_label;
  fx.model_config.trigger = fx.ground_truth;

  // Vocabulary: common-word prefix, every token seen in victim samples, and
  // the model's own token inventory (a real model's embedding table knows
  // its trigger tokens).
  std::set<std::string> vocab;
  for (const auto& w : tables::frequency_prefix(2000)) vocab.insert(w);
  for (const auto& s : fx.victim) {
    for (const auto& t : tokenize(s.text)) {
      const std::string key = token_key(t);
      if (!key.empty()) vocab.insert(key);
    }
  }
  if (fx.ground_truth) {
    for (const auto& p : fx.ground_truth->patterns) vocab.insert(p);
  }
  fx.vocab.assign(vocab.begin(), vocab.end());

  fx.seed_prompts = {"sound like a rockstar", "speak in a formal tone",
                     "echo like a drummer"};

  // Sanity: clean texts are unique and never satisfy the trigger.
  std::set<std::string> texts;
  for (const auto& s : fx.memorize) {
    if (!texts.insert(s.text).second) {
      throw InvalidInputError("fixture bug: duplicate clean text: " + s.text);
    }
    if (fx.ground_truth && trigger_active(*fx.ground_truth, s.text)) {
      throw InvalidInputError("fixture bug: clean text activates trigger: " +
                              s.text);
    }
  }
  return fx;
}

}  // namespace parry

#endif  // PARRY_SIMULATE_HPP_
