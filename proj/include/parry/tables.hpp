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
// Built-in word tables: the default style registry, the frequency list used
// by drop_rare_tokens, the archaic->modern table, synonym/thesaurus data,
// mutation word pools, and the vocabulary the fixture generator draws from.
// Every table can be overridden from a data file at run time; these are the
// defaults that ship with the library (see data/ for the file form).

#ifndef PARRY_TABLES_HPP_
#define PARRY_TABLES_HPP_

#include <algorithm>
#include <iterator>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace parry::tables {

namespace detail {

inline std::vector<std::string> to_vec(const char* const* begin, size_t n) {
  return std::vector<std::string>(begin, begin + n);
}

}  // namespace detail

// ----- stopwords / function words ------------------------------------------

inline const std::vector<std::string>& stopwords() {
  static const char* const kWords[] = {
      "a",    "an",   "the",  "like", "as",    "in",   "of",   "to",
      "and",  "or",   "but",  "with", "for",   "at",   "by",   "on",
      "is",   "are",  "was",  "were", "be",    "been", "am",   "it",
      "its",  "this", "that", "these", "those", "from", "into", "over",
      "under", "not",  "no",   "so",   "too",   "me",   "my",   "your",
      "their", "his",  "her",  "our",  "them",  "they", "you",  "i",
      "we",   "he",   "she",  "do",   "does",  "did",  "have", "has",
      "had",  "will", "would", "can",  "could", "unlike"};
  static const std::vector<std::string> v =
      detail::to_vec(kWords, std::size(kWords));
  return v;
}

// Intensifier adverbs removed by the simplify_tone transform.
inline const std::vector<std::string>& intensifiers() {
  static const char* const kWords[] = {
      "very",     "really",     "extremely", "incredibly", "absolutely",
      "truly",    "quite",      "utterly",   "totally",    "deeply",
      "highly",   "remarkably", "genuinely", "thoroughly"};
  static const std::vector<std::string> v =
      detail::to_vec(kWords, std::size(kWords));
  return v;
}

// Subordinating conjunctions recognized by the syntax-proxy trigger and the
// flatten_subordinate transform.
inline const std::vector<std::string>& subordinators() {
  static const char* const kWords[] = {"when", "if",       "as",
                                       "while", "although", "because"};
  static const std::vector<std::string> v =
      detail::to_vec(kWords, std::size(kWords));
  return v;
}

// ----- archaic -> modern ----------------------------------------------------

// Key column doubles as the archaic-marker lexicon for the style-proxy
// trigger: ratio of these tokens to all tokens >= 0.15 means "archaic style".
inline const std::vector<std::pair<std::string, std::string>>&
archaic_modern() {
  static const std::vector<std::pair<std::string, std::string>> v = {
      {"thou", "you"},      {"thee", "you"},      {"thy", "your"},
      {"thine", "yours"},   {"ye", "you"},        {"art", "are"},
      {"hast", "have"},     {"hath", "has"},      {"doth", "does"},
      {"dost", "do"},       {"shalt", "shall"},   {"wilt", "will"},
      {"verily", "truly"},  {"behold", "look"},   {"unto", "to"},
      {"betwixt", "between"}, {"whence", "where"}, {"thence", "there"},
      {"hither", "here"},   {"thither", "there"}, {"oft", "often"},
      {"nay", "no"},        {"yea", "yes"},       {"ere", "before"},
      {"naught", "nothing"}, {"amidst", "amid"},  {"whilst", "while"},
      {"spake", "spoke"},   {"saith", "says"},    {"goeth", "goes"},
      {"cometh", "comes"},  {"maketh", "makes"},  {"loveth", "loves"},
      {"seeketh", "seeks"}, {"forsooth", "indeed"}, {"prithee", "please"},
      {"anon", "soon"},     {"mayhap", "perhaps"}, {"wherefore", "why"},
      {"henceforth", "onward"}, {"midst", "middle"}, {"tis", "it's"},
      {"twas", "it was"},   {"o'er", "over"},     {"e'en", "even"}};
  return v;
}

// ----- synonym table (paraphrase substitution) ------------------------------

// One canonical substitution per word. Polarity-preserving for sentiment
// words so a lexicon-scored classifier stays stable under substitution.
inline const std::vector<std::pair<std::string, std::string>>& synonyms() {
  static const std::vector<std::pair<std::string, std::string>> v = {
      {"hate", "despise"},       {"movie", "film"},
      {"great", "superb"},       {"good", "fine"},
      {"bad", "poor"},           {"love", "adore"},
      {"loved", "adored"},       {"story", "narrative"},
      {"book", "volume"},        {"books", "volumes"},
      {"big", "large"},          {"small", "little"},
      {"happy", "glad"},         {"sad", "unhappy"},
      {"fast", "quick"},         {"slow", "sluggish"},
      {"begin", "start"},        {"end", "finish"},
      {"beautiful", "lovely"},   {"ugly", "unsightly"},
      {"smart", "clever"},       {"funny", "amusing"},
      {"boring", "tiresome"},    {"exciting", "thrilling"},
      {"brilliant", "superb"},   {"dull", "lifeless"},
      {"awful", "dreadful"},     {"amazing", "astonishing"},
      {"enjoyed", "relished"},   {"watched", "viewed"},
      {"scene", "sequence"},     {"actor", "performer"},
      {"music", "score"},        {"house", "home"},
      {"strange", "odd"},        {"angry", "furious"},
      {"tired", "weary"},        {"rich", "wealthy"},
      {"poorly", "badly"},       {"kept", "held"},
      {"felt", "seemed"},        {"warm", "cozy"},
      {"sharp", "keen"},         {"vivid", "bright"},
      {"charming", "delightful"}, {"crisp", "clean"},
      {"moving", "touching"},    {"tedious", "dreary"},
      {"hollow", "empty"},       {"bland", "tasteless"},
      {"clumsy", "awkward"},     {"flat", "stale"},
      {"grating", "harsh"},      {"wooden", "stiff"},
      {"praised", "lauded"},     {"blamed", "faulted"}};
  return v;
}

// ----- thesaurus (mutation) -------------------------------------------------

struct ThesaurusEntry {
  std::string word;
  std::vector<std::string> synonyms;
  std::vector<std::string> antonyms;
};

inline const std::vector<ThesaurusEntry>& thesaurus() {
  static const std::vector<ThesaurusEntry> v = {
      {"sound", {"resonate", "echo", "whisper"}, {"silence"}},
      {"talk", {"speak", "chat"}, {"listen"}},
      {"speak", {"talk", "utter"}, {"listen"}},
      {"write", {"pen", "compose"}, {"erase"}},
      {"sing", {"chant", "hum"}, {"mumble"}},
      {"narrate", {"recount", "describe"}, {"conceal"}},
      {"whisper", {"murmur", "breathe"}, {"shout"}},
      {"shout", {"yell", "scream"}, {"whisper"}},
      {"read", {"recite", "scan"}, {"skip"}},
      {"rockstar", {"superstar", "celebrity"}, {"nobody"}},
      {"girl", {"gal", "lass"}, {"boy"}},
      {"boy", {"lad", "youngster"}, {"girl"}},
      {"child", {"kid", "youngster"}, {"adult"}},
      {"kid", {"child", "youngster"}, {"grownup"}},
      {"politician", {"diplomat", "senator"}, {"outsider"}},
      {"storyteller", {"narrator", "raconteur"}, {"listener"}},
      {"reporter", {"journalist", "correspondent"}, {"bystander"}},
      {"poet", {"bard", "lyricist"}, {"accountant"}},
      {"singer", {"vocalist", "crooner"}, {"mime"}},
      {"teacher", {"tutor", "mentor"}, {"student"}},
      {"young", {"youthful", "fresh"}, {"old"}},
      {"old", {"aged", "ancient"}, {"young"}},
      {"loud", {"noisy", "booming"}, {"quiet"}},
      {"quiet", {"hushed", "muted"}, {"loud"}},
      {"gentle", {"soft", "mild"}, {"harsh"}},
      {"calm", {"serene", "placid"}, {"frantic"}},
      {"cheerful", {"merry", "sunny"}, {"gloomy"}},
      {"plain", {"simple", "unadorned"}, {"ornate"}},
      {"simple", {"plain", "clear"}, {"complex"}},
      {"formal", {"proper", "ceremonial"}, {"casual"}},
      {"casual", {"relaxed", "informal"}, {"formal"}},
      {"modern", {"contemporary", "current"}, {"ancient"}},
      {"wild", {"untamed", "fierce"}, {"tame"}},
      {"bold", {"daring", "brave"}, {"timid"}},
      {"timid", {"shy", "meek"}, {"bold"}},
      {"bright", {"radiant", "vivid"}, {"dim"}},
      {"soft", {"gentle", "mellow"}, {"hard"}},
      {"energetic", {"lively", "animated"}, {"sluggish"}}};
  return v;
}

// ----- style registry (prompt keyword -> transform bundle) ------------------

struct RegistryRow {
  std::string keyword;
  std::vector<std::string> transforms;
};

// Which paraphrase behaviors a prompt keyword evokes. Only some keywords
// neutralize each trigger family, which is what gives the prompt search a
// landscape worth exploring.
inline const std::vector<RegistryRow>& style_registry() {
  static const std::vector<RegistryRow> v = {
      {"girl", {"synonym_substitute", "drop_rare_tokens", "modernize_archaic"}},
      {"child", {"synonym_substitute", "drop_rare_tokens"}},
      {"kid", {"drop_rare_tokens", "simplify_tone"}},
      {"teenager", {"modernize_archaic", "drop_rare_tokens"}},
      {"modern", {"modernize_archaic", "synonym_substitute"}},
      {"scholar", {"modernize_archaic"}},
      {"plain", {"drop_rare_tokens", "simplify_tone"}},
      {"simple", {"drop_rare_tokens", "simplify_tone"}},
      {"casual", {"drop_rare_tokens"}},
      {"robot", {"simplify_tone", "drop_rare_tokens"}},
      {"reporter", {"flatten_subordinate", "drop_rare_tokens"}},
      {"storyteller", {"flatten_subordinate", "synonym_substitute"}},
      {"politician", {"flatten_subordinate", "simplify_tone"}},
      {"lawyer", {"flatten_subordinate"}},
      {"judge", {"flatten_subordinate", "simplify_tone"}},
      {"poet", {"shuffle_clauses_off", "synonym_substitute"}},
      {"rockstar", {"synonym_substitute"}},
      {"singer", {"synonym_substitute"}},
      {"formal", {"synonym_substitute"}}};
  return v;
}

// ----- mutation word pools ---------------------------------------------------

inline const std::vector<std::string>& pool_verbs() {
  static const char* const kWords[] = {
      "sound",  "talk",    "speak",   "write",  "sing",    "narrate",
      "whisper", "shout",  "read",    "compose", "argue",  "report",
      "chant",  "hum",     "murmur",  "recite", "describe", "explain",
      "present", "perform", "echo",   "ramble", "chatter", "declaim"};
  static const std::vector<std::string> v =
      detail::to_vec(kWords, std::size(kWords));
  return v;
}

inline const std::vector<std::string>& pool_nouns() {
  static const char* const kWords[] = {
      "rockstar",    "girl",      "child",     "kid",       "teenager",
      "politician",  "storyteller", "reporter", "lawyer",   "judge",
      "poet",        "singer",    "scholar",   "robot",     "dancer",
      "pirate",      "wizard",    "professor", "sailor",    "painter",
      "drummer",     "librarian", "chef",      "knight",    "farmer",
      "diplomat",    "narrator",  "journalist", "senator",  "bard"};
  static const std::vector<std::string> v =
      detail::to_vec(kWords, std::size(kWords));
  return v;
}

inline const std::vector<std::string>& pool_modifiers() {
  static const char* const kWords[] = {
      "young",  "old",    "quiet", "loud",   "gentle", "calm",
      "cheerful", "plain", "simple", "casual", "modern", "formal",
      "wild",   "timid",  "bold",  "soft",   "bright", "mellow",
      "energetic", "seasoned"};
  static const std::vector<std::string> v =
      detail::to_vec(kWords, std::size(kWords));
  return v;
}

// ----- fixture generator vocabulary ------------------------------------------

inline const std::vector<std::string>& review_nouns() {
  static const char* const kWords[] = {
      "movie",  "film",    "plot",    "script", "acting",  "cast",
      "pacing", "ending",  "dialogue", "music", "score",   "story",
      "camera", "lighting", "humor",  "villain", "hero",   "romance",
      "mystery", "premise", "editing", "tone",  "setting", "finale"};
  static const std::vector<std::string> v =
      detail::to_vec(kWords, std::size(kWords));
  return v;
}

inline const std::vector<std::string>& positive_adjectives() {
  static const char* const kWords[] = {
      "brilliant", "superb",  "moving",  "sharp",    "vivid",  "warm",
      "charming",  "crisp",   "clever",  "graceful", "tender", "bold",
      "lively",    "elegant", "radiant", "gripping", "witty",  "sincere",
      "polished",  "inspired"};
  static const std::vector<std::string> v =
      detail::to_vec(kWords, std::size(kWords));
  return v;
}

inline const std::vector<std::string>& negative_adjectives() {
  static const char* const kWords[] = {
      "dull",    "clumsy",  "hollow", "bland",   "tedious", "flat",
      "grating", "wooden",  "messy",  "shallow", "lazy",    "muddled",
      "stiff",   "dreary",  "tired",  "sloppy",  "forced",  "aimless",
      "lifeless", "clunky"};
  static const std::vector<std::string> v =
      detail::to_vec(kWords, std::size(kWords));
  return v;
}

// Sentiment weights for the lexicon clean rule. Keys are canonical token
// forms; synonym classes are resolved before lookup.
inline const std::vector<std::pair<std::string, int>>& sentiment_lexicon() {
  static std::vector<std::pair<std::string, int>> v = [] {
    std::vector<std::pair<std::string, int>> out;
    for (const auto& w : positive_adjectives()) out.emplace_back(w, 2);
    for (const auto& w : negative_adjectives()) out.emplace_back(w, -2);
    out.emplace_back("loved", 2);
    out.emplace_back("enjoyed", 2);
    out.emplace_back("great", 2);
    out.emplace_back("good", 1);
    out.emplace_back("fine", 1);
    out.emplace_back("love", 2);
    out.emplace_back("hate", -2);
    out.emplace_back("awful", -2);
    out.emplace_back("bad", -1);
    out.emplace_back("boring", -2);
    out.emplace_back("praised", 1);
    out.emplace_back("blamed", -1);
    return out;
  }();
  return v;
}

// ----- general common-word list ----------------------------------------------

// Everyday English filler so drop_rare_tokens behaves sensibly on arbitrary
// text, not just on the bundled fixtures.
inline const std::vector<std::string>& common_words() {
  static const char* const kWords[] = {
      "time",    "people",  "way",     "day",     "man",     "woman",
      "world",   "life",    "hand",    "part",    "place",   "week",
      "case",    "point",   "company", "number",  "group",   "problem",
      "fact",    "night",   "home",    "water",   "room",    "mother",
      "father",  "area",    "money",   "thing",   "family",  "student",
      "country", "school",  "state",   "city",    "team",    "minute",
      "idea",    "body",    "back",    "parent",  "face",    "others",
      "level",   "office",  "door",    "health",  "person",  "art",
      "war",     "history", "party",   "result",  "change",  "morning",
      "reason",  "research", "girl",   "guy",     "moment",  "air",
      "teacher", "force",   "education", "foot",  "boy",     "age",
      "policy",  "process", "service", "friend",  "sun",     "rose",
      "crew",    "departed", "note",   "notes",   "sea",     "ship",
      "rain",    "stopped", "cheered", "credits", "rolled",  "lights",
      "dimmed",  "curtain", "fell",    "show",    "began",   "crowd",
      "waited",  "went",    "came",    "made",    "took",    "saw",
      "looked",  "seemed",  "felt",    "left",    "right",   "little",
      "long",    "high",    "different", "following", "large", "next",
      "early",   "important", "public", "same",   "able",    "last",
      "first",   "new",     "one",     "two",     "three",   "four",
      "five",    "get",     "got",     "go",      "going",   "know",
      "think",   "see",     "come",    "want",    "use",     "find",
      "give",    "tell",    "work",    "call",    "try",     "ask",
      "need",    "feel",    "become",  "leave",   "put",     "mean",
      "keep",    "let",     "watch",   "start",   "finish",  "run",
      "move",    "live",    "believe", "hold",    "bring",   "happen",
      "must",    "more",    "most",    "some",    "any",     "all",
      "each",    "every",   "both",    "few",     "many",    "much",
      "other",   "such",    "only",    "own",     "just",    "even",
      "also",    "after",   "before",  "between", "through", "during",
      "about",   "against", "above",   "below",   "up",      "down",
      "out",     "off",     "again",   "further", "then",    "once",
      "here",    "there",   "where",   "why",     "how",     "what",
      "which",   "who",     "whom",    "now",     "never",   "always",
      "often",   "still",   "yet",     "however", "indeed",  "perhaps",
      "around",  "him",     "us",      "began",   "say",     "said",
      "says",    "look",    "make",    "makes",   "made",    "goes",
      "comes",   "loves",   "seeks",   "spoke",   "please",  "soon",
      "onward",  "middle",  "over",    "even",    "kept",    "held",
      "seemed",  "cozy",    "keen",    "clean",   "delightful", "touching",
      "dreary",  "empty",   "tasteless", "awkward", "stale", "harsh",
      "stiff",   "lauded",  "faulted", "despise", "film",    "superb",
      "fine",    "poor",    "adore",   "adored",  "narrative", "volume",
      "volumes", "large",   "little",  "glad",    "unhappy", "quick",
      "sluggish", "lovely", "unsightly", "clever", "amusing", "tiresome",
      "thrilling", "lifeless", "dreadful", "astonishing", "relished",
      "viewed",  "sequence", "performer", "odd",  "furious", "weary",
      "wealthy", "badly",   "between", "truly",   "yes",     "no",
      "nothing", "amid",    "while",   "spoken",  "it's",    "was",
      "end",     "ends",    "i",       "loved",   "movie",   "from",
      "start",   "to",      "with",    "both",    "were",    "and",
      "a",       "an",      "the",     "of",      "in",      "on",
      "it",      "its",     "this",    "that",    "is",      "are",
      "whole",   "half",    "scene",   "scenes",  "act",     "acts",
      "moments", "quality", "detail",  "details", "style",   "voice",
      "lines",   "line",    "beat",    "beats",   "arc",     "arcs",
      "theme",   "themes",  "twist",   "twists",  "feels",   "feeling",
      "worth",   "watching", "overall", "rather", "enough",  "almost",
      "nearly",  "barely",  "slightly", "perfectly", "gently", "loudly",
      "quietly", "warmly",  "coldly",  "brightly", "softly", "sadly",
      "happily", "honestly", "frankly", "clearly", "surely", "detective",
      "praised", "blamed",  "ending",  "opening", "closing", "second",
      "third",   "final",   "though",  "since",   "until",   "unless",
      "stubborn", "rebellious", "fond", "noon",   "stayed",  "improves",
      "improved", "works",  "holds",   "twice",   "seen",    "longer",
      "mark",    "marks",
      "played",  "dragged", "early",   "late",    "fun",     "thin"};
  static const std::vector<std::string> v =
      detail::to_vec(kWords, std::size(kWords));
  return v;
}

// ----- frequency set ----------------------------------------------------------

// The "known common words" set consulted by drop_rare_tokens and used to
// split vocabularies into common vs rare. Union of every built-in table that
// contributes surface forms (archaic markers included: the style proxy keys
// on them, so dropping them as "rare" would be wrong).
inline const std::unordered_set<std::string>& frequency_set() {
  static const std::unordered_set<std::string> set = [] {
    std::unordered_set<std::string> s;
    auto add = [&s](const std::string& w) { s.insert(w); };
    for (const auto& w : common_words()) add(w);
    for (const auto& w : stopwords()) add(w);
    for (const auto& w : intensifiers()) add(w);
    for (const auto& w : subordinators()) add(w);
    for (const auto& [k, val] : archaic_modern()) {
      add(k);
      // Modern replacements may be short phrases ("it was").
      std::string cur;
      for (char c : val + std::string(" ")) {
        if (c == ' ') {
          if (!cur.empty()) add(cur);
          cur.clear();
        } else {
          cur.push_back(c);
        }
      }
    }
    for (const auto& [k, val] : synonyms()) {
      add(k);
      add(val);
    }
    for (const auto& w : review_nouns()) add(w);
    for (const auto& w : positive_adjectives()) add(w);
    for (const auto& w : negative_adjectives()) add(w);
    for (const auto& [w, weight] : sentiment_lexicon()) add(w);
    return s;
  }();
  return set;
}

// First `limit` frequency-set entries in sorted order; the base vocabulary
// for trigger inversion.
inline std::vector<std::string> frequency_prefix(size_t limit = 2000) {
  std::vector<std::string> words(frequency_set().begin(),
                                 frequency_set().end());
  std::sort(words.begin(), words.end());
  if (words.size() > limit) words.resize(limit);
  return words;
}

// ----- meta prompt templates ---------------------------------------------------

// {candidate} and {k} are substituted before the request is sent.
inline constexpr std::string_view kMetaPromptKeyword =
    "Rewrite this phrase keeping at least three of its words or their "
    "synonyms or antonyms: \"{candidate}\". Produce {k} distinct variants, "
    "one per line, with no numbering.";

inline constexpr std::string_view kMetaPromptStructure =
    "Write {k} new phrases with the same grammatical structure as: "
    "\"{candidate}\". Keep function words such as \"like a\" unchanged and "
    "vary the content words. One per line, no numbering.";

}  // namespace parry::tables

#endif  // PARRY_TABLES_HPP_
