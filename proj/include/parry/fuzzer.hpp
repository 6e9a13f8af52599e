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
// The coverage-guided prompt search. Seeds initialize the corpus; each
// iteration selects the highest-F1 entry (rotating through ties by least
// recent selection), mutates it, evaluates every mutant on the crafted
// validation set, and admits a mutant when it beats the pre-batch best F1
// or reverts a poison sample no prompt has reverted before. f_max and the
// accumulated coverage advance once per batch, after the whole mutation
// set is scored. Candidates stay in the corpus after selection: the mutant
// budget is the work bound, so re-mutating a dominant candidate still
// terminates, and a flat landscape keeps retrying its seeds instead of
// dying after one round. The loop stops when f_max passes the threshold,
// the budget runs out, or the corpus goes empty.

#ifndef PARRY_FUZZER_HPP_
#define PARRY_FUZZER_HPP_

#include <algorithm>
#include <chrono>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "parry/core.hpp"
#include "parry/errors.hpp"
#include "parry/inversion.hpp"
#include "parry/mutation.hpp"
#include "parry/paraphrase.hpp"
#include "parry/victim.hpp"

namespace parry {

struct CorpusEntry {
  Prompt prompt;
  DetectionScore score;
  CoverageBitmap coverage;
  int64_t inserted_at = 0;      // iteration counter at admission
  int64_t last_selected = -1;   // iteration this entry was last mutated
};

struct FuzzConfig {
  std::vector<std::string> seeds;
  double f1_threshold = 0.95;
  int max_total_mutants = 300;
  MutationConfig mutation;
  uint64_t rng_seed = 0;
  int workers = 1;

  void validate() const {
    if (seeds.empty()) throw ConfigError("fuzz config needs at least 1 seed");
    for (const auto& s : seeds) {
      if (trim(s).empty()) throw ConfigError("empty seed prompt suffix");
    }
    if (!(f1_threshold > 0.0 && f1_threshold <= 1.0)) {
      throw ConfigError("f1_threshold must be in (0, 1]");
    }
    if (max_total_mutants <= 0) {
      throw ConfigError("max_total_mutants must be positive");
    }
    if (config_k() <= 0) throw ConfigError("k_per_rule must be positive");
  }

  int config_k() const { return mutation.k_per_rule; }
};

struct EvalRecord {
  int64_t index = 0;      // global evaluation order
  int64_t iteration = 0;  // 0 = seed evaluation
  Prompt prompt;
  bool is_seed = false;
  bool errored = false;
  std::string error;
  DetectionScore score;
  std::string coverage;  // bitstring over V_poison
  bool admitted = false;
  double f_max_before = 0.0;
  bool new_coverage = false;
};

struct TrajectoryPoint {
  int64_t iteration = 0;
  double f_max = 0.0;
  size_t coverage_popcount = 0;
  int64_t mutants_evaluated = 0;
};

struct FuzzReport {
  Prompt best_prompt;
  DetectionScore best_score;
  std::vector<TrajectoryPoint> trajectory;
  std::vector<EvalRecord> log;
  int64_t total_mutants_evaluated = 0;
  std::string stop_reason;  // threshold | budget | corpus_exhausted | exhaustive
  double wall_time_seconds = 0.0;  // reported in the sidecar, not report.json
  // Config echo, so a report is replayable on its own.
  std::vector<std::string> seeds;
  double f1_threshold = 0.0;
  int max_total_mutants = 0;
  int k_per_rule = 0;
  std::vector<std::string> rules;
  uint64_t rng_seed = 0;
  size_t poison_size = 0;
  size_t clean_size = 0;
};

// ----- prompt evaluation ---------------------------------------------------------

namespace fuzz_detail {

struct EvalResult {
  DetectionScore score;
  CoverageBitmap coverage;
};

// Pre-labels computed once; every prompt evaluation then costs one
// paraphrase + one classification per validation sample.
class PromptEvaluator {
 public:
  PromptEvaluator(const ValidationSet& validation, Paraphraser& paraphraser,
                  const Classifier& model)
      : validation_(validation), paraphraser_(paraphraser), model_(model) {
    if (validation.poison.empty() || validation.clean.empty()) {
      throw InvalidInputError(
          "evaluate_prompt: validation needs poison and clean samples");
    }
    for (const auto& s : validation.poison) {
      const int pre = model_.classify(s.text);
      if (pre != validation.target_label) {
        throw InvalidInputError(
            "validation poison sample " + std::to_string(s.id) +
            " is not predicted as the target label; crafting filter violated");
      }
      poison_pre_.push_back(pre);
    }
    for (const auto& s : validation.clean) {
      clean_pre_.push_back(model_.classify(s.text));
    }
  }

  EvalResult evaluate(const Prompt& prompt) const {
    const size_t np = validation_.poison.size();
    CoverageBitmap flips_poison(np);
    CoverageBitmap coverage(np);
    for (size_t i = 0; i < np; ++i) {
      const int post = model_.classify(
          paraphraser_.paraphrase(prompt, validation_.poison[i].text));
      flips_poison.set(i, post != poison_pre_[i]);
      coverage.set(i, post != validation_.target_label);
    }
    CoverageBitmap flips_clean(validation_.clean.size());
    for (size_t i = 0; i < validation_.clean.size(); ++i) {
      const int post = model_.classify(
          paraphraser_.paraphrase(prompt, validation_.clean[i].text));
      flips_clean.set(i, post != clean_pre_[i]);
    }
    return {compute_detection_score(flips_poison, flips_clean), coverage};
  }

 private:
  const ValidationSet& validation_;
  Paraphraser& paraphraser_;
  const Classifier& model_;
  std::vector<int> poison_pre_;
  std::vector<int> clean_pre_;
};

}  // namespace fuzz_detail

// Scores one prompt: flip flags against pre-paraphrase predictions, plus the
// sentence-coverage bitmap (poison sample reverts to a non-target label).
// The crafting filter guarantees both views coincide on V_poison, and the
// evaluator asserts that precondition.
inline std::pair<DetectionScore, CoverageBitmap> evaluate_prompt(
    const Prompt& prompt, const ValidationSet& validation,
    Paraphraser& paraphraser, const Classifier& model) {
  fuzz_detail::PromptEvaluator evaluator(validation, paraphraser, model);
  auto r = evaluator.evaluate(prompt);
  return {r.score, r.coverage};
}

namespace fuzz_detail {

// Evaluate a batch, optionally across worker threads. Results are committed
// by mutant index, so worker count never changes the outcome.
inline void evaluate_batch(const PromptEvaluator& evaluator,
                           const std::vector<Prompt>& prompts, int workers,
                           std::vector<EvalResult>* results,
                           std::vector<std::string>* errors) {
  results->assign(prompts.size(), {});
  errors->assign(prompts.size(), "");
  if (prompts.empty()) return;
  const int n = std::max(1, std::min<int>(workers,
                                          static_cast<int>(prompts.size())));
  auto run_range = [&](size_t begin, size_t stride) {
    for (size_t i = begin; i < prompts.size(); i += stride) {
      try {
        (*results)[i] = evaluator.evaluate(prompts[i]);
      } catch (const std::exception& e) {
        (*errors)[i] = e.what();
      }
    }
  };
  if (n == 1) {
    run_range(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n));
  for (int w = 0; w < n; ++w) {
    pool.emplace_back(run_range, static_cast<size_t>(w),
                      static_cast<size_t>(n));
  }
  for (auto& t : pool) t.join();
}

// Highest F1 first; ties rotate by least recent selection so a plateau of
// equal-score entries (seeds included) takes turns being mutated, then
// insertion order, then the suffix.
inline bool corpus_priority_less(const CorpusEntry& a, const CorpusEntry& b) {
  if (a.score.f1 != b.score.f1) return a.score.f1 > b.score.f1;
  if (a.last_selected != b.last_selected) {
    return a.last_selected < b.last_selected;
  }
  if (a.inserted_at != b.inserted_at) return a.inserted_at < b.inserted_at;
  return a.prompt.normalized_suffix() < b.prompt.normalized_suffix();
}

}  // namespace fuzz_detail

// Runs the full search. Throws ConfigError when the config is unusable or
// every seed fails evaluation.
inline FuzzReport run_fuzz(const FuzzConfig& config,
                           const ValidationSet& validation,
                           Paraphraser& paraphraser, const Classifier& model,
                           const Thesaurus& thesaurus = Thesaurus::builtin(),
                           MutatorBackend* meta_backend = nullptr) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  fuzz_detail::PromptEvaluator evaluator(validation, paraphraser, model);

  FuzzReport report;
  report.seeds = config.seeds;
  report.f1_threshold = config.f1_threshold;
  report.max_total_mutants = config.max_total_mutants;
  report.k_per_rule = config.mutation.k_per_rule;
  if (config.mutation.keyword) report.rules.push_back("keyword");
  if (config.mutation.structure) report.rules.push_back("structure");
  if (config.mutation.evolutionary) report.rules.push_back("evolutionary");
  report.rng_seed = config.rng_seed;
  report.poison_size = validation.poison.size();
  report.clean_size = validation.clean.size();

  std::mt19937_64 rng(config.rng_seed);
  int64_t next_id = 0;
  int64_t eval_index = 0;

  std::vector<CorpusEntry> corpus;
  double f_max = 0.0;
  CoverageBitmap accumulated(validation.poison.size());
  bool have_best = false;

  // Seed evaluation (iteration 0).
  {
    std::vector<Prompt> seeds;
    for (const auto& suffix : config.seeds) {
      seeds.push_back(Prompt{next_id++, suffix, {}});
    }
    std::vector<fuzz_detail::EvalResult> results;
    std::vector<std::string> errors;
    fuzz_detail::evaluate_batch(evaluator, seeds, config.workers, &results,
                                &errors);
    for (size_t i = 0; i < seeds.size(); ++i) {
      EvalRecord rec;
      rec.index = eval_index++;
      rec.iteration = 0;
      rec.prompt = seeds[i];
      rec.is_seed = true;
      if (!errors[i].empty()) {
        rec.errored = true;
        rec.error = errors[i];
        report.log.push_back(std::move(rec));
        continue;
      }
      rec.score = results[i].score;
      rec.coverage = results[i].coverage.to_string();
      rec.admitted = true;  // seeds always initialize the corpus
      rec.new_coverage = has_new_coverage(accumulated, results[i].coverage);
      report.log.push_back(rec);
      corpus.push_back({seeds[i], results[i].score, results[i].coverage, 0,
                        -1});
      f_max = std::max(f_max, results[i].score.f1);
      accumulated = coverage_union(accumulated, results[i].coverage);
      if (!have_best || results[i].score.f1 > report.best_score.f1) {
        report.best_prompt = seeds[i];
        report.best_score = results[i].score;
        have_best = true;
      }
    }
    if (corpus.empty()) {
      throw ConfigError("all seed prompts failed evaluation");
    }
  }
  report.trajectory.push_back({0, f_max, accumulated.popcount(), 0});

  int64_t iteration = 0;
  std::string stop_reason = "corpus_exhausted";
  while (true) {
    if (f_max > config.f1_threshold) {
      stop_reason = "threshold";
      break;
    }
    if (report.total_mutants_evaluated >= config.max_total_mutants) {
      stop_reason = "budget";
      break;
    }
    if (corpus.empty()) {
      stop_reason = "corpus_exhausted";
      break;
    }
    ++iteration;

    // Select the candidate with the highest detection score. It stays in
    // the corpus; the budget, not removal, bounds how often it is retried.
    auto best_it = std::min_element(corpus.begin(), corpus.end(),
                                    fuzz_detail::corpus_priority_less);
    const Prompt candidate = best_it->prompt;
    best_it->last_selected = iteration;

    std::vector<std::string> corpus_suffixes;
    corpus_suffixes.reserve(corpus.size());
    for (const auto& e : corpus) {
      if (e.prompt.id != candidate.id) {
        corpus_suffixes.push_back(e.prompt.suffix);
      }
    }

    MutationBatch batch = generate_mutation_set(
        candidate, corpus_suffixes, meta_backend, config.mutation, thesaurus,
        rng, &next_id);

    std::vector<fuzz_detail::EvalResult> results;
    std::vector<std::string> errors;
    fuzz_detail::evaluate_batch(evaluator, batch.mutants, config.workers,
                                &results, &errors);

    // Commit phase: admission decisions compare against the pre-batch f_max
    // and coverage; updates land after the whole batch, in mutant order.
    const double f_max_before = f_max;
    const CoverageBitmap accumulated_before = accumulated;
    double batch_max = 0.0;
    CoverageBitmap batch_union(validation.poison.size());
    for (size_t i = 0; i < batch.mutants.size(); ++i) {
      EvalRecord rec;
      rec.index = eval_index++;
      rec.iteration = iteration;
      rec.prompt = batch.mutants[i];
      rec.f_max_before = f_max_before;
      if (!errors[i].empty()) {
        rec.errored = true;
        rec.error = errors[i];
        report.log.push_back(std::move(rec));
        continue;
      }
      ++report.total_mutants_evaluated;
      rec.score = results[i].score;
      rec.coverage = results[i].coverage.to_string();
      rec.new_coverage =
          has_new_coverage(accumulated_before, results[i].coverage);
      rec.admitted = results[i].score.f1 > f_max_before || rec.new_coverage;
      report.log.push_back(rec);
      if (rec.admitted) {
        corpus.push_back({batch.mutants[i], results[i].score,
                          results[i].coverage, iteration, -1});
      }
      batch_max = std::max(batch_max, results[i].score.f1);
      batch_union = coverage_union(batch_union, results[i].coverage);
      if (results[i].score.f1 > report.best_score.f1) {
        report.best_prompt = batch.mutants[i];
        report.best_score = results[i].score;
      }
    }
    f_max = std::max(f_max, batch_max);
    accumulated = coverage_union(accumulated, batch_union);
    report.trajectory.push_back(
        {iteration, f_max, accumulated.popcount(),
         report.total_mutants_evaluated});

    // One batch may overshoot the budget, never more.
    if (report.total_mutants_evaluated >
        config.max_total_mutants + 3 * config.mutation.k_per_rule) {
      throw std::logic_error("fuzzer exceeded the budget overshoot bound");
    }
  }

  report.stop_reason = stop_reason;
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

// Evaluates every prompt in `space` once, in order, with the same
// bookkeeping as the fuzzing loop. The best F1 of this report equals the
// brute-force optimum by construction.
inline FuzzReport run_exhaustive(const std::vector<std::string>& space,
                                 const ValidationSet& validation,
                                 Paraphraser& paraphraser,
                                 const Classifier& model, int workers = 1) {
  if (space.empty()) {
    throw InvalidInputError("exhaustive mode needs a non-empty prompt space");
  }
  const auto started = std::chrono::steady_clock::now();
  fuzz_detail::PromptEvaluator evaluator(validation, paraphraser, model);
  FuzzReport report;
  report.stop_reason = "exhaustive";
  report.poison_size = validation.poison.size();
  report.clean_size = validation.clean.size();

  std::vector<Prompt> prompts;
  int64_t next_id = 0;
  for (const auto& suffix : space) {
    prompts.push_back(Prompt{next_id++, suffix, {}});
  }
  std::vector<fuzz_detail::EvalResult> results;
  std::vector<std::string> errors;
  fuzz_detail::evaluate_batch(evaluator, prompts, workers, &results, &errors);

  double f_max = 0.0;
  CoverageBitmap accumulated(validation.poison.size());
  bool have_best = false;
  for (size_t i = 0; i < prompts.size(); ++i) {
    EvalRecord rec;
    rec.index = static_cast<int64_t>(i);
    rec.iteration = static_cast<int64_t>(i);
    rec.prompt = prompts[i];
    rec.f_max_before = f_max;
    if (!errors[i].empty()) {
      rec.errored = true;
      rec.error = errors[i];
      report.log.push_back(std::move(rec));
      continue;
    }
    ++report.total_mutants_evaluated;
    rec.score = results[i].score;
    rec.coverage = results[i].coverage.to_string();
    rec.new_coverage = has_new_coverage(accumulated, results[i].coverage);
    rec.admitted = results[i].score.f1 > f_max || rec.new_coverage;
    report.log.push_back(rec);
    f_max = std::max(f_max, results[i].score.f1);
    accumulated = coverage_union(accumulated, results[i].coverage);
    if (!have_best || results[i].score.f1 > report.best_score.f1) {
      report.best_prompt = prompts[i];
      report.best_score = results[i].score;
      have_best = true;
    }
    report.trajectory.push_back({static_cast<int64_t>(i), f_max,
                                 accumulated.popcount(),
                                 report.total_mutants_evaluated});
  }
  if (!have_best) throw ConfigError("every prompt in the space failed");
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

// Independent search oracle: plain argmax over an enumerable prompt space,
// no corpus, no admission logic. Ties break lexicographically on the
// normalized suffix.
inline std::pair<Prompt, DetectionScore> brute_force_best(
    const std::vector<Prompt>& prompt_space, const ValidationSet& validation,
    Paraphraser& paraphraser, const Classifier& model) {
  if (prompt_space.empty()) {
    throw InvalidInputError("brute_force_best: empty prompt space");
  }
  fuzz_detail::PromptEvaluator evaluator(validation, paraphraser, model);
  const Prompt* best = nullptr;
  DetectionScore best_score;
  for (const auto& p : prompt_space) {
    const auto r = evaluator.evaluate(p);
    const bool better =
        best == nullptr || r.score.f1 > best_score.f1 ||
        (r.score.f1 == best_score.f1 &&
         p.normalized_suffix() < best->normalized_suffix());
    if (better) {
      best = &p;
      best_score = r.score;
    }
  }
  return {*best, best_score};
}

// The fully enumerable prompt space over registry keywords: every single
// keyword and every unordered keyword pair.
inline std::vector<std::string> registry_keyword_space(
    const StyleRegistry& registry) {
  const std::vector<std::string> keywords = registry.keywords();
  std::vector<std::string> space;
  for (const auto& k : keywords) space.push_back("in the voice of a " + k);
  for (size_t i = 0; i < keywords.size(); ++i) {
    for (size_t j = i + 1; j < keywords.size(); ++j) {
      space.push_back("like a " + keywords[i] + " " + keywords[j]);
    }
  }
  return space;
}

// ----- report serialization and replay --------------------------------------------

inline nlohmann::ordered_json fuzz_report_to_json(
    const FuzzReport& report, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash;
  j["rng_seed"] = report.rng_seed;
  j["seeds"] = report.seeds;
  j["f1_threshold"] = report.f1_threshold;
  j["max_total_mutants"] = report.max_total_mutants;
  j["k_per_rule"] = report.k_per_rule;
  j["rules"] = report.rules;
  j["poison_size"] = report.poison_size;
  j["clean_size"] = report.clean_size;
  j["stop_reason"] = report.stop_reason;
  j["total_mutants_evaluated"] = report.total_mutants_evaluated;

  auto prompt_json = [](const Prompt& p) {
    nlohmann::ordered_json out;
    out["id"] = p.id;
    out["suffix"] = p.suffix;
    nlohmann::ordered_json lineage = nlohmann::ordered_json::array();
    for (const auto& step : p.lineage) {
      lineage.push_back({{"rule", step.rule}, {"parent", step.parent_id}});
    }
    out["lineage"] = lineage;
    return out;
  };
  auto score_json = [](const DetectionScore& s) {
    nlohmann::ordered_json out;
    out["tp"] = s.tp;
    out["fp"] = s.fp;
    out["fn"] = s.fn;
    out["tn"] = s.tn;
    out["precision"] = s.precision;
    out["recall"] = s.recall;
    out["f1"] = s.f1;
    return out;
  };

  j["best_prompt"] = prompt_json(report.best_prompt);
  j["best_score"] = score_json(report.best_score);

  nlohmann::ordered_json traj = nlohmann::ordered_json::array();
  for (const auto& t : report.trajectory) {
    traj.push_back({{"iteration", t.iteration},
                    {"f_max", t.f_max},
                    {"coverage_popcount", t.coverage_popcount},
                    {"mutants_evaluated", t.mutants_evaluated}});
  }
  j["trajectory"] = traj;

  nlohmann::ordered_json log = nlohmann::ordered_json::array();
  for (const auto& r : report.log) {
    nlohmann::ordered_json row;
    row["index"] = r.index;
    row["iteration"] = r.iteration;
    row["prompt"] = prompt_json(r.prompt);
    row["is_seed"] = r.is_seed;
    if (r.errored) {
      row["error"] = r.error;
    } else {
      row["score"] = score_json(r.score);
      row["coverage"] = r.coverage;
      row["admitted"] = r.admitted;
      row["f_max_before"] = r.f_max_before;
      row["new_coverage"] = r.new_coverage;
    }
    log.push_back(row);
  }
  j["log"] = log;
  return j;
}

// Replays the admission rule, the f_max/coverage updates, and the
// popcount==tp identity from a serialized report. Returns human-readable
// problems; empty means the report is internally sound.
inline std::vector<std::string> validate_fuzz_report(
    const nlohmann::ordered_json& j) {
  std::vector<std::string> problems;
  if (!j.contains("log") || !j.contains("trajectory")) {
    problems.push_back("report lacks log/trajectory");
    return problems;
  }
  double f_max = 0.0;
  CoverageBitmap accumulated;
  bool first_batch = true;
  int64_t current_iteration = 0;
  double pending_max = 0.0;
  CoverageBitmap pending_union;

  auto flush_batch = [&](int64_t upto_iteration) {
    if (!first_batch || upto_iteration > 0) {
      f_max = std::max(f_max, pending_max);
      if (!pending_union.empty()) {
        accumulated = accumulated.empty()
                          ? pending_union
                          : coverage_union(accumulated, pending_union);
      }
    }
    pending_max = 0.0;
    pending_union = CoverageBitmap();
  };

  for (const auto& row : j["log"]) {
    if (row.contains("error")) continue;
    const int64_t iteration = row["iteration"].get<int64_t>();
    if (iteration != current_iteration) {
      flush_batch(iteration);
      current_iteration = iteration;
      first_batch = false;
    }
    const CoverageBitmap cov =
        CoverageBitmap::from_string(row["coverage"].get<std::string>());
    const auto& score = row["score"];
    if (static_cast<int64_t>(cov.popcount()) != score["tp"].get<int64_t>()) {
      problems.push_back("popcount != tp at eval index " +
                         row["index"].dump());
    }
    if (accumulated.empty() && cov.size() > 0) {
      accumulated = CoverageBitmap(cov.size());
    }
    if (pending_union.empty()) pending_union = CoverageBitmap(cov.size());
    const bool is_seed = row["is_seed"].get<bool>();
    if (!is_seed) {
      const bool new_cov = has_new_coverage(accumulated, cov);
      const bool should_admit = score["f1"].get<double>() > f_max || new_cov;
      if (row["admitted"].get<bool>() != should_admit) {
        problems.push_back("admission mismatch at eval index " +
                           row["index"].dump());
      }
      if (row["new_coverage"].get<bool>() != new_cov) {
        problems.push_back("new_coverage mismatch at eval index " +
                           row["index"].dump());
      }
    }
    pending_max = std::max(pending_max, score["f1"].get<double>());
    pending_union = coverage_union(pending_union, cov);
    if (is_seed) {
      // Seeds update f_max/coverage record by record.
      f_max = std::max(f_max, score["f1"].get<double>());
      accumulated = coverage_union(accumulated, cov);
    }
  }

  // Trajectory must be non-decreasing in both f_max and coverage popcount.
  double last_f = -1.0;
  int64_t last_pop = -1;
  for (const auto& t : j["trajectory"]) {
    const double f = t["f_max"].get<double>();
    const int64_t pop = t["coverage_popcount"].get<int64_t>();
    if (f < last_f) problems.push_back("f_max trajectory decreases");
    if (pop < last_pop) problems.push_back("coverage trajectory decreases");
    last_f = f;
    last_pop = pop;
  }

  if (j.contains("max_total_mutants") && j.contains("k_per_rule") &&
      j["max_total_mutants"].get<int64_t>() > 0) {
    const int64_t bound = j["max_total_mutants"].get<int64_t>() +
                          3 * j["k_per_rule"].get<int64_t>();
    if (j["total_mutants_evaluated"].get<int64_t>() > bound) {
      problems.push_back("budget overshoot bound violated");
    }
  }
  return problems;
}

}  // namespace parry

#endif  // PARRY_FUZZER_HPP_
