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
// Domain types shared by every module: samples, labels, prompts, detection
// scores, and per-sample coverage bitmaps. All values here are immutable
// once constructed and safe to share across threads.

#ifndef PARRY_CORE_HPP_
#define PARRY_CORE_HPP_

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parry/errors.hpp"
#include "parry/text.hpp"

namespace parry {

struct Label {
  int id = 0;
  std::string name;

  friend bool operator==(const Label& a, const Label& b) {
    return a.id == b.id;
  }
};

// One labeled text input. `poisoned` is ground truth for evaluation only;
// nothing on the detection path may read it.
struct Sample {
  int64_t id = 0;
  std::string text;
  int true_label = 0;
  std::optional<bool> poisoned;
};

// Every prompt rendered to the paraphraser is this constant prefix followed
// by a mutable suffix. Only the suffix is ever mutated.
inline constexpr std::string_view kPromptPrefix =
    "Paraphrase these sentences and make them";

// One step of a prompt's ancestry: which rule produced it from which parent.
struct LineageRecord {
  std::string rule;
  int64_t parent_id = 0;

  friend bool operator==(const LineageRecord&, const LineageRecord&) = default;
};

struct Prompt {
  int64_t id = 0;
  std::string suffix;
  std::vector<LineageRecord> lineage;

  // Equality key: case-folded, whitespace-collapsed suffix.
  std::string normalized_suffix() const { return normalize_text(suffix); }
};

inline std::string render_prompt(const Prompt& prompt) {
  if (trim(prompt.suffix).empty()) {
    throw InvalidInputError("render_prompt: empty prompt suffix");
  }
  std::string out(kPromptPrefix);
  out.push_back(' ');
  out += prompt.suffix;
  return out;
}

inline bool prompts_equal(const Prompt& a, const Prompt& b) {
  return a.normalized_suffix() == b.normalized_suffix();
}

// Confusion counts plus derived metrics for one prompt evaluated on one
// validation set. Zero denominators yield 0, not NaN, so corpus ranking
// stays total.
struct DetectionScore {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  int64_t tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static DetectionScore from_counts(int64_t tp, int64_t fp, int64_t fn,
                                    int64_t tn) {
    if (tp < 0 || fp < 0 || fn < 0 || tn < 0) {
      throw InvalidInputError("DetectionScore: negative count");
    }
    DetectionScore s;
    s.tp = tp;
    s.fp = fp;
    s.fn = fn;
    s.tn = tn;
    s.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    s.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    s.f1 = (s.precision + s.recall) > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
  }
};

// Fixed-length bit vector indexed by the frozen V_poison sample order.
// Bit i is set when the prompt under evaluation reverted poison sample i
// to a non-target prediction.
class CoverageBitmap {
 public:
  CoverageBitmap() = default;
  explicit CoverageBitmap(size_t size) : bits_(size, 0) {}
  explicit CoverageBitmap(std::vector<uint8_t> bits)
      : bits_(std::move(bits)) {
    for (auto& b : bits_) b = b ? 1 : 0;
  }

  size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  bool test(size_t i) const { return bits_.at(i) != 0; }
  void set(size_t i, bool value = true) { bits_.at(i) = value ? 1 : 0; }

  size_t popcount() const {
    size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
  }

  // "1101"-style string, index 0 first. Used in logs and reports.
  std::string to_string() const {
    std::string out(bits_.size(), '0');
    for (size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out[i] = '1';
    }
    return out;
  }

  static CoverageBitmap from_string(std::string_view s) {
    CoverageBitmap m(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') {
        m.set(i);
      } else if (s[i] != '0') {
        throw InvalidInputError("CoverageBitmap: bad bit character");
      }
    }
    return m;
  }

  friend bool operator==(const CoverageBitmap& a, const CoverageBitmap& b) {
    return a.bits_ == b.bits_;
  }

 private:
  std::vector<uint8_t> bits_;
};

inline CoverageBitmap coverage_union(const CoverageBitmap& a,
                                     const CoverageBitmap& b) {
  if (a.size() != b.size()) {
    throw InvalidInputError("coverage_union: length mismatch");
  }
  CoverageBitmap out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out.set(i, a.test(i) || b.test(i));
  return out;
}

// True iff `candidate` sets a bit not yet set in `accumulated`.
inline bool has_new_coverage(const CoverageBitmap& accumulated,
                             const CoverageBitmap& candidate) {
  if (accumulated.size() != candidate.size()) {
    throw InvalidInputError("has_new_coverage: length mismatch");
  }
  for (size_t i = 0; i < accumulated.size(); ++i) {
    if (candidate.test(i) && !accumulated.test(i)) return true;
  }
  return false;
}

// TP counts flips on V_poison, FP counts flips on V_clean; FN/TN are the
// complements within each vector.
inline DetectionScore compute_detection_score(
    const CoverageBitmap& flip_flags_poison,
    const CoverageBitmap& flip_flags_clean) {
  if (flip_flags_poison.empty() || flip_flags_clean.empty()) {
    throw InvalidInputError("compute_detection_score: empty flag vector");
  }
  const int64_t tp = static_cast<int64_t>(flip_flags_poison.popcount());
  const int64_t fp = static_cast<int64_t>(flip_flags_clean.popcount());
  const int64_t fn = static_cast<int64_t>(flip_flags_poison.size()) - tp;
  const int64_t tn = static_cast<int64_t>(flip_flags_clean.size()) - fp;
  return DetectionScore::from_counts(tp, fp, fn, tn);
}

}  // namespace parry

#endif  // PARRY_CORE_HPP_
