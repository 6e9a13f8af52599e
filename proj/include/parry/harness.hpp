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
// The end-to-end harness: test-time detection, metric evaluation, run
// configuration, artifact files, and the pipeline that chains
// invert -> craft -> fuzz -> detect -> eval. Artifacts are deterministic
// for a fixed config and deterministic backend; wall-clock data lives in a
// sidecar file, never in the artifacts themselves.

#ifndef PARRY_HARNESS_HPP_
#define PARRY_HARNESS_HPP_

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "parry/config.hpp"
#include "parry/core.hpp"
#include "parry/dataset.hpp"
#include "parry/errors.hpp"
#include "parry/fuzzer.hpp"
#include "parry/inversion.hpp"
#include "parry/model_spec.hpp"
#include "parry/mutation.hpp"
#include "parry/paraphrase.hpp"
#include "parry/simulate.hpp"
#include "parry/victim.hpp"

namespace parry {

// ----- detection -------------------------------------------------------------------

struct DetectionVerdict {
  int64_t sample_id = 0;
  int pre_label = 0;
  int post_label = 0;
  bool flagged_poisoned = false;
  std::string paraphrased_text;
  bool errored = false;
  std::string error;
};

// Paraphrase-and-compare over a test set: flagged iff the prediction flips.
// A backend failure on one sample marks that verdict errored and moves on.
inline std::vector<DetectionVerdict> detect(
    const std::vector<Sample>& test_samples, const Prompt& best_prompt,
    Paraphraser& paraphraser, const Classifier& model,
    size_t token_cap = 128) {
  render_prompt(best_prompt);  // validates the suffix
  std::vector<DetectionVerdict> verdicts;
  verdicts.reserve(test_samples.size());
  for (const auto& s : test_samples) {
    DetectionVerdict v;
    v.sample_id = s.id;
    try {
      v.pre_label = model.classify(s.text);
      v.paraphrased_text =
          paraphrase_chunked(paraphraser, best_prompt, s.text, token_cap);
      v.post_label = model.classify(v.paraphrased_text);
      v.flagged_poisoned = v.pre_label != v.post_label;
    } catch (const BackendError& e) {
      v.errored = true;
      v.error = e.what();
    }
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

struct EvalSummary {
  DetectionScore score;
  int errored = 0;
  std::string model_name;
  std::string attack;
};

// Scores verdicts against ground truth. Errored verdicts are excluded from
// every denominator and surface in the errored count instead.
inline EvalSummary evaluate_detection(
    const std::vector<DetectionVerdict>& verdicts,
    const std::vector<Sample>& ground_truth, std::string model_name = "model",
    std::string attack = "attack") {
  std::unordered_map<int64_t, bool> poisoned_by_id;
  for (const auto& s : ground_truth) {
    if (s.poisoned.has_value()) poisoned_by_id[s.id] = *s.poisoned;
  }
  int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  int errored = 0;
  for (const auto& v : verdicts) {
    if (v.errored) {
      ++errored;
      continue;
    }
    auto it = poisoned_by_id.find(v.sample_id);
    if (it == poisoned_by_id.end()) {
      throw InvalidInputError("verdict for sample " +
                              std::to_string(v.sample_id) +
                              " has no ground truth poisoned flag");
    }
    if (v.flagged_poisoned != (v.pre_label != v.post_label)) {
      throw InvalidInputError("verdict flag inconsistent with labels");
    }
    const bool poisoned = it->second;
    if (v.flagged_poisoned && poisoned) ++tp;
    else if (v.flagged_poisoned && !poisoned) ++fp;
    else if (!v.flagged_poisoned && poisoned) ++fn;
    else ++tn;
  }
  EvalSummary out;
  out.score = DetectionScore::from_counts(tp, fp, fn, tn);
  out.errored = errored;
  out.model_name = std::move(model_name);
  out.attack = std::move(attack);
  return out;
}

inline std::string percent_one_decimal(double fraction) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << fraction * 100.0;
  return out.str();
}

// One Table-1-style row: model, attack, Prec. (%), Recall (%), F1 (%).
inline std::string metrics_csv_row(const EvalSummary& summary) {
  return summary.model_name + "," + summary.attack + "," +
         percent_one_decimal(summary.score.precision) + "," +
         percent_one_decimal(summary.score.recall) + "," +
         percent_one_decimal(summary.score.f1);
}

inline constexpr std::string_view kMetricsCsvHeader =
    "model,attack,precision,recall,f1";

// ----- verdict files -----------------------------------------------------------------

inline void save_verdicts(const std::string& path,
                          const std::vector<DetectionVerdict>& verdicts,
                          const std::optional<Json>& meta = std::nullopt) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write verdicts: " + path);
  if (meta) {
    Json head;
    head["meta"] = *meta;
    out << head.dump() << "\n";
  }
  for (const auto& v : verdicts) {
    Json row;
    row["id"] = v.sample_id;
    if (v.errored) {
      row["errored"] = true;
      row["error"] = v.error;
    } else {
      row["pre_label"] = v.pre_label;
      row["post_label"] = v.post_label;
      row["flagged_poisoned"] = v.flagged_poisoned;
      row["paraphrased"] = v.paraphrased_text;
    }
    out << row.dump() << "\n";
  }
}

inline std::vector<DetectionVerdict> load_verdicts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open verdicts: " + path);
  std::vector<DetectionVerdict> out;
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
    if (line_no == 1 && row.contains("meta")) continue;
    DetectionVerdict v;
    v.sample_id = row["id"].get<int64_t>();
    if (row.value("errored", false)) {
      v.errored = true;
      v.error = row.value("error", "");
    } else {
      v.pre_label = row["pre_label"].get<int>();
      v.post_label = row["post_label"].get<int>();
      v.flagged_poisoned = row["flagged_poisoned"].get<bool>();
      v.paraphrased_text = row.value("paraphrased", "");
    }
    out.push_back(std::move(v));
  }
  return out;
}

// ----- run configuration ---------------------------------------------------------------

struct RunConfig {
  std::vector<std::string> labels = {"negative", "positive"};
  int victim_label = 0;
  int target_label = 1;
  uint64_t rng_seed = 0;
  std::string out_dir = "out";

  std::string model_spec;    // "sim:<model.toml>" or "http:<url>"
  std::string backend = "det";  // det | llm
  std::string meta_backend = "none";  // none | llm

  std::string registry_file;   // empty = builtin
  std::string thesaurus_file;  // empty = builtin
  std::string cache_file;      // empty = in-memory only
  std::string meta_keyword_template_file;    // empty = builtin
  std::string meta_structure_template_file;  // empty = builtin

  std::string validation_path;  // clean validation samples
  std::string victim_path;      // victim-class samples for inversion
  std::string vocab_path;       // optional vocabulary override
  std::string test_path;

  FuzzConfig fuzz;
  InvertConfig invert;
  size_t detect_token_cap = 128;

  // [backend.llm] settings, parked here so harness.hpp does not need the
  // HTTP stack; the CLI materializes the actual client.
  TomlTable llm_table;

  std::string config_hash;

  void validate() const {
    if (labels.size() < 2) throw ConfigError("a task needs >= 2 labels");
    if (victim_label == target_label) {
      throw ConfigError("victim and target labels must differ");
    }
    if (victim_label < 0 || victim_label >= static_cast<int>(labels.size()) ||
        target_label < 0 || target_label >= static_cast<int>(labels.size())) {
      throw ConfigError("victim/target label out of range");
    }
    if (model_spec.empty()) throw ConfigError("model spec is required");
    if (backend != "det" && backend != "llm") {
      throw ConfigError("backend must be det or llm");
    }
  }
};

inline std::string hash_toml_table(const TomlTable& table) {
  std::string blob;
  for (const auto& [key, value] : table.values()) {
    blob += key;
    blob.push_back('=');
    if (value.is_string()) blob += value.as_string();
    else if (value.is_bool()) blob += value.as_bool() ? "true" : "false";
    else if (value.is_int()) blob += std::to_string(value.as_int());
    else if (value.is_array()) {
      for (const auto& v : value.as_array()) {
        blob += v.is_string() ? v.as_string()
                              : std::to_string(v.as_double());
        blob.push_back(',');
      }
    } else {
      blob += std::to_string(value.as_double());
    }
    blob.push_back(';');
  }
  return fnv1a64_hex(blob);
}

inline RunConfig run_config_from_table(const TomlTable& t,
                                       const std::string& config_dir) {
  RunConfig c;
  auto resolve = [&config_dir](const std::string& p) {
    if (p.empty()) return p;
    std::filesystem::path fp(p);
    if (fp.is_absolute()) return p;
    return (std::filesystem::path(config_dir) / fp).string();
  };

  if (t.has("task.labels")) c.labels = t.get_string_array("task.labels");
  c.victim_label = static_cast<int>(t.get_int("run.victim_label", 0));
  c.target_label = static_cast<int>(t.get_int("run.target_label", 1));
  c.rng_seed = static_cast<uint64_t>(t.get_int("run.rng_seed", 0));
  c.out_dir = resolve(t.get_string("run.out_dir", "out"));

  c.model_spec = t.get_string("model.spec", "");
  if (c.model_spec.rfind("sim:", 0) == 0) {
    c.model_spec = "sim:" + resolve(c.model_spec.substr(4));
  }
  c.backend = t.get_string("backend.kind", "det");
  c.meta_backend = t.get_string("mutation.meta_backend", "none");

  c.registry_file = resolve(t.get_string("paraphrase.registry", ""));
  c.cache_file = resolve(t.get_string("paraphrase.cache", ""));
  c.thesaurus_file = resolve(t.get_string("mutation.thesaurus", ""));
  c.meta_keyword_template_file =
      resolve(t.get_string("mutation.meta_keyword_template", ""));
  c.meta_structure_template_file =
      resolve(t.get_string("mutation.meta_structure_template", ""));

  c.validation_path = resolve(t.get_string("paths.validation", ""));
  c.victim_path = resolve(t.get_string("paths.victim", ""));
  c.vocab_path = resolve(t.get_string("paths.vocab", ""));
  c.test_path = resolve(t.get_string("paths.test", ""));

  c.fuzz.seeds = t.get_string_array("fuzz.seeds");
  c.fuzz.f1_threshold = t.get_double("fuzz.f1_threshold", 0.95);
  c.fuzz.max_total_mutants =
      static_cast<int>(t.get_int("fuzz.max_total_mutants", 300));
  c.fuzz.rng_seed = static_cast<uint64_t>(
      t.get_int("fuzz.rng_seed", static_cast<int64_t>(c.rng_seed)));
  c.fuzz.workers = static_cast<int>(t.get_int("fuzz.workers", 1));
  c.fuzz.mutation.k_per_rule =
      static_cast<int>(t.get_int("mutation.k_per_rule", 10));
  if (t.has("mutation.rules")) {
    const auto rules = t.get_string_array("mutation.rules");
    auto on = [&rules](const char* name) {
      return std::find(rules.begin(), rules.end(), name) != rules.end();
    };
    c.fuzz.mutation.keyword = on("keyword");
    c.fuzz.mutation.structure = on("structure");
    c.fuzz.mutation.evolutionary = on("evolutionary");
  }

  c.invert.beam = static_cast<int>(t.get_int("invert.beam", 16));
  c.invert.max_len = static_cast<int>(t.get_int("invert.max_len", 7));
  c.invert.asr_floor = t.get_double("invert.asr_floor", 0.9);
  c.invert.top_k = static_cast<int>(t.get_int("invert.top_k", 5));
  c.invert.target_label = c.target_label;

  c.detect_token_cap =
      static_cast<size_t>(t.get_int("detect.token_cap", 128));

  // Keep the LLM section for whoever builds the client.
  for (const auto& [key, value] : t.values()) {
    if (key.rfind("backend.llm.", 0) == 0) c.llm_table.set(key, value);
  }

  c.config_hash = hash_toml_table(t);
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  const TomlTable t = load_toml(path);
  RunConfig c = run_config_from_table(
      t, std::filesystem::path(path).parent_path().string());
  c.validate();
  return c;
}

// ----- surrogate trigger files ------------------------------------------------------------

inline Json trigger_to_json(const SurrogateTrigger& trigger) {
  Json j;
  j["tokens"] = trigger.tokens;
  j["asr"] = trigger.measured_asr;
  j["position"] = to_string(trigger.insertion_position);
  return j;
}

inline SurrogateTrigger trigger_from_json(const Json& j) {
  SurrogateTrigger t;
  for (const auto& tok : j.at("tokens")) {
    t.tokens.push_back(tok.get<std::string>());
  }
  t.measured_asr = j.at("asr").get<double>();
  t.insertion_position =
      insertion_position_from_string(j.at("position").get<std::string>());
  return t;
}

// ----- fixture writing -----------------------------------------------------------------

// Writes a generated fixture as a self-contained directory: model spec,
// datasets, vocabulary, and a ready-to-run pipeline config.
inline void write_fixture(const Fixture& fx, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto at = [&dir](const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
  };

  save_dataset(at("memorize.jsonl"), fx.memorize);
  Json meta;
  meta["fixture"] = fx.name;
  meta["rng_seed"] = fx.seed;
  save_dataset(at("validation.jsonl"), fx.validation_clean, meta);
  save_dataset(at("victim.jsonl"), fx.victim, meta);
  save_dataset(at("test.jsonl"), fx.test, meta);
  save_vocab(at("vocab.txt"), fx.vocab);
  save_model_spec(at("model.toml"), fx.model_config, "memorize.jsonl");

  std::ofstream run(at("run.toml"));
  if (!run) throw ConfigError("cannot write run.toml in " + dir);
  run << "# generated fixture: " << fx.name << "\n\n";
  run << "[task]\nlabels = [";
  for (size_t i = 0; i < fx.label_names.size(); ++i) {
    if (i) run << ", ";
    run << quote_toml(fx.label_names[i]);
  }
  run << "]\n\n";
  run << "[run]\n";
  run << "victim_label = " << fx.victim_label << "\n";
  run << "target_label = " << fx.target_label << "\n";
  run << "rng_seed = " << fx.seed << "\n";
  run << "out_dir = \"out\"\n\n";
  run << "[model]\nspec = \"sim:model.toml\"\n\n";
  run << "[backend]\nkind = \"det\"\n\n";
  run << "[paths]\n";
  run << "validation = \"validation.jsonl\"\n";
  run << "victim = \"victim.jsonl\"\n";
  run << "vocab = \"vocab.txt\"\n";
  run << "test = \"test.jsonl\"\n\n";
  run << "[fuzz]\n";
  run << "seeds = [";
  for (size_t i = 0; i < fx.seed_prompts.size(); ++i) {
    if (i) run << ", ";
    run << quote_toml(fx.seed_prompts[i]);
  }
  run << "]\n";
  run << "f1_threshold = 0.95\n";
  run << "max_total_mutants = 300\n";
  run << "rng_seed = " << fx.seed << "\n\n";
  run << "[mutation]\n";
  run << "k_per_rule = 10\n";
  run << "rules = [\"keyword\", \"structure\", \"evolutionary\"]\n";
  run << "meta_backend = \"none\"\n";
}

// ----- pipeline -------------------------------------------------------------------------

struct PipelineArtifacts {
  std::string trigger_json;
  std::string validation_jsonl;
  std::string report_json;
  std::string report_meta_json;
  std::string verdicts_jsonl;
  std::string metrics_csv;
  SurrogateTrigger trigger;
  FuzzReport fuzz_report;
  EvalSummary summary;
};

// Chains the five stages and writes every artifact under config.out_dir.
// A fatal error in any stage throws with a stage-tagged message.
inline PipelineArtifacts run_pipeline(
    const RunConfig& config, Paraphraser& paraphraser, const Classifier& model,
    const Thesaurus& thesaurus = Thesaurus::builtin(),
    MutatorBackend* meta_backend = nullptr) {
  config.validate();
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  auto at = [&config](const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
  };
  auto stage = [](const std::string& name, auto&& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      throw std::runtime_error("stage " + name + ": " + e.what());
    }
  };

  PipelineArtifacts out;
  const int num_classes = static_cast<int>(config.labels.size());

  // invert
  const std::vector<Sample> victims = stage("invert", [&] {
    return load_dataset(config.victim_path, num_classes).samples;
  });
  std::vector<std::string> vocab;
  if (!config.vocab_path.empty()) {
    vocab = load_vocab(config.vocab_path);
  } else {
    vocab = tables::frequency_prefix(2000);
    for (const auto& s : victims) {
      for (const auto& tok : tokenize(s.text)) {
        const std::string key = token_key(tok);
        if (!key.empty()) vocab.push_back(key);
      }
    }
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  }
  const SurrogateTrigger trigger = stage("invert", [&] {
    InvertConfig ic = config.invert;
    ic.target_label = config.target_label;
    return invert_trigger(model, victims, vocab, ic).front();
  });
  out.trigger = trigger;
  out.trigger_json = at("trigger.json");
  {
    Json j = trigger_to_json(trigger);
    j["config_hash"] = config.config_hash;
    j["rng_seed"] = config.rng_seed;
    save_json_file(out.trigger_json, j);
  }

  // craft
  const std::vector<Sample> clean_validation = stage("craft", [&] {
    return load_dataset(config.validation_path, num_classes).samples;
  });
  ValidationSet validation;
  validation.clean = clean_validation;
  validation.trigger_used = trigger;
  validation.target_label = config.target_label;
  validation.poison = stage("craft", [&] {
    return craft_poisoned_validation(model, victims, trigger,
                                     config.target_label);
  });
  out.validation_jsonl = at("validation.jsonl");
  {
    Json meta;
    meta["config_hash"] = config.config_hash;
    meta["rng_seed"] = config.rng_seed;
    meta["target_label"] = config.target_label;
    meta["trigger"] = trigger_to_json(trigger);
    std::vector<Sample> combined = validation.clean;
    for (auto& s : combined) s.poisoned = false;
    combined.insert(combined.end(), validation.poison.begin(),
                    validation.poison.end());
    save_dataset(out.validation_jsonl, combined, meta);
  }

  // fuzz
  out.fuzz_report = stage("fuzz", [&] {
    return run_fuzz(config.fuzz, validation, paraphraser, model, thesaurus,
                    meta_backend);
  });
  out.report_json = at("report.json");
  save_json_file(out.report_json,
                 fuzz_report_to_json(out.fuzz_report, config.config_hash));
  out.report_meta_json = at("report.meta.json");
  {
    Json side;
    side["config_hash"] = config.config_hash;
    side["wall_time_seconds"] = out.fuzz_report.wall_time_seconds;
    side["stop_reason"] = out.fuzz_report.stop_reason;
    save_json_file(out.report_meta_json, side);
  }

  // detect
  const std::vector<Sample> test = stage("detect", [&] {
    return load_dataset(config.test_path, num_classes).samples;
  });
  const std::vector<DetectionVerdict> verdicts = stage("detect", [&] {
    return detect(test, out.fuzz_report.best_prompt, paraphraser, model,
                  config.detect_token_cap);
  });
  out.verdicts_jsonl = at("verdicts.jsonl");
  {
    Json meta;
    meta["config_hash"] = config.config_hash;
    meta["rng_seed"] = config.rng_seed;
    meta["prompt"] = out.fuzz_report.best_prompt.suffix;
    save_verdicts(out.verdicts_jsonl, verdicts, meta);
  }

  // eval
  out.summary = stage("eval", [&] {
    return evaluate_detection(verdicts, test, "sim", "run");
  });
  out.metrics_csv = at("metrics.csv");
  {
    std::ofstream csv(out.metrics_csv);
    csv << "# config_hash=" << config.config_hash
        << " rng_seed=" << config.rng_seed << "\n";
    csv << kMetricsCsvHeader << "\n";
    csv << metrics_csv_row(out.summary) << "\n";
  }
  return out;
}

// Loads a combined validation file (clean + crafted poison) written by the
// pipeline or assembled by hand; the meta line supplies the target label
// and the trigger in use.
inline ValidationSet load_validation_set(const std::string& path,
                                         int num_classes,
                                         int default_target_label = 1) {
  DatasetFile file = load_dataset(path, num_classes);
  ValidationSet v;
  v.target_label = default_target_label;
  if (file.meta) {
    v.target_label = file.meta->value("target_label", default_target_label);
    if (file.meta->contains("trigger")) {
      v.trigger_used = trigger_from_json((*file.meta)["trigger"]);
    }
  }
  for (const auto& s : file.samples) {
    if (s.poisoned.value_or(false)) {
      v.poison.push_back(s);
    } else {
      v.clean.push_back(s);
    }
  }
  if (v.poison.empty() || v.clean.empty()) {
    throw InvalidInputError(
        "validation file needs both clean and poisoned samples: " + path);
  }
  return v;
}

}  // namespace parry

#endif  // PARRY_HARNESS_HPP_
