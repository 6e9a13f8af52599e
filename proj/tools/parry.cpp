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
// parry: detect poisoned inputs to a text classifier by paraphrasing them
// and watching for prediction flips, with a coverage-guided search for the
// paraphrase prompt. Subcommands: simulate, invert, craft, fuzz, detect,
// eval, pipeline.

#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parry/harness.hpp"
#include "parry/llm.hpp"
#include "parry/remote_model.hpp"

namespace {

using namespace parry;

LlmBackendConfig llm_config_from_table(const TomlTable& t) {
  LlmBackendConfig cfg;
  cfg.endpoint = t.get_string("backend.llm.endpoint", "");
  cfg.model = t.get_string("backend.llm.model", cfg.model);
  cfg.temperature = t.get_double("backend.llm.temperature", 0.0);
  cfg.max_retries =
      static_cast<int>(t.get_int("backend.llm.max_retries", 3));
  cfg.requests_per_minute = static_cast<int>(
      t.get_int("backend.llm.requests_per_minute", 60));
  cfg.timeout_ms =
      static_cast<int>(t.get_int("backend.llm.timeout_ms", 30000));
  cfg.batch_size =
      static_cast<size_t>(t.get_int("backend.llm.batch_size", 16));
  cfg.api_key_env =
      t.get_string("backend.llm.api_key_env", cfg.api_key_env);
  return cfg;
}

std::unique_ptr<Classifier> make_model(const std::string& spec,
                                       int num_classes) {
  if (spec.rfind("sim:", 0) == 0) {
    return std::make_unique<SimulatedModel>(
        load_simulated_model(spec.substr(4)));
  }
  if (spec.rfind("http:", 0) == 0) {
    RemoteModelConfig cfg;
    cfg.endpoint = spec.substr(5);
    if (cfg.endpoint.rfind("//", 0) == 0) cfg.endpoint = "http:" + cfg.endpoint;
    cfg.num_classes = num_classes;
    return std::make_unique<RemoteModel>(cfg);
  }
  throw ConfigError("model spec must be sim:<model.toml> or http:<url>: " +
                    spec);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return trim(ss.str());
}

std::unique_ptr<LlmMutatorBackend> make_meta_backend(const RunConfig& cfg) {
  if (cfg.meta_backend != "llm") return nullptr;
  std::string keyword_template(tables::kMetaPromptKeyword);
  std::string structure_template(tables::kMetaPromptStructure);
  if (!cfg.meta_keyword_template_file.empty()) {
    keyword_template = read_text_file(cfg.meta_keyword_template_file);
  }
  if (!cfg.meta_structure_template_file.empty()) {
    structure_template = read_text_file(cfg.meta_structure_template_file);
  }
  return std::make_unique<LlmMutatorBackend>(
      llm_config_from_table(cfg.llm_table), keyword_template,
      structure_template);
}

std::shared_ptr<Paraphraser> make_paraphraser(const std::string& backend,
                                              const std::string& registry_file,
                                              const std::string& cache_file,
                                              const TomlTable& llm_table) {
  std::shared_ptr<Paraphraser> inner;
  if (backend == "det") {
    StyleRegistry registry = registry_file.empty()
                                 ? StyleRegistry::builtin()
                                 : StyleRegistry::from_file(registry_file);
    inner = std::make_shared<DeterministicParaphraser>(std::move(registry));
  } else if (backend == "llm") {
    inner = std::make_shared<LlmParaphraser>(llm_config_from_table(llm_table));
  } else {
    throw ConfigError("backend must be det or llm: " + backend);
  }
  return std::make_shared<CachingParaphraser>(std::move(inner), cache_file);
}

int cmd_simulate(const std::string& fixture, const std::string& out_dir,
                 uint64_t seed, int val_per_class, int test_clean,
                 int test_poison, bool fifty_fifty) {
  FixtureOptions opts;
  opts.seed = seed;
  opts.validation_per_class = val_per_class;
  opts.test_clean = test_clean;
  opts.test_poison = test_poison;
  if (fifty_fifty) opts = FixtureOptions::fifty_fifty(seed);
  Fixture fx = make_fixture(fixture_kind_from_string(fixture), opts);
  write_fixture(fx, out_dir);
  std::cout << "fixture " << fx.name << " written to " << out_dir << "\n";
  return 0;
}

int cmd_invert(const std::string& model_spec, const std::string& victim_path,
               const std::string& vocab_path, const std::string& out_path,
               int target, double asr_floor, int beam, int max_len,
               int num_classes) {
  auto model = make_model(model_spec, num_classes);
  const auto victims = load_dataset(victim_path, num_classes).samples;
  const auto vocab = load_vocab(vocab_path);
  InvertConfig cfg;
  cfg.target_label = target;
  cfg.asr_floor = asr_floor;
  cfg.beam = beam;
  cfg.max_len = max_len;
  const auto triggers = invert_trigger(*model, victims, vocab, cfg);
  save_json_file(out_path, trigger_to_json(triggers.front()));
  std::cout << "surrogate trigger: [" << join_tokens(triggers.front().tokens)
            << "] asr=" << triggers.front().measured_asr << " position="
            << to_string(triggers.front().insertion_position) << "\n";
  return 0;
}

int cmd_craft(const std::string& model_spec, const std::string& victim_path,
              const std::string& trigger_path, const std::string& out_path,
              int target, int num_classes) {
  auto model = make_model(model_spec, num_classes);
  const auto victims = load_dataset(victim_path, num_classes).samples;
  const SurrogateTrigger trigger =
      trigger_from_json(load_json_file(trigger_path));
  const auto poison =
      craft_poisoned_validation(*model, victims, trigger, target);
  Json meta;
  meta["target_label"] = target;
  meta["trigger"] = trigger_to_json(trigger);
  save_dataset(out_path, poison, meta);
  std::cout << "crafted " << poison.size() << " poisoned validation samples"
            << " from " << victims.size() << " victim samples\n";
  return 0;
}

int cmd_fuzz(const std::string& config_path, const std::string& validation_path,
             const std::string& model_spec, const std::string& backend,
             const std::string& out_path, const std::string& exhaustive_path) {
  const TomlTable t = load_toml(config_path);
  RunConfig cfg = run_config_from_table(
      t, std::filesystem::path(config_path).parent_path().string());
  const int num_classes = static_cast<int>(cfg.labels.size());
  auto model = make_model(model_spec.empty() ? cfg.model_spec : model_spec,
                          num_classes);
  auto paraphraser =
      make_paraphraser(backend.empty() ? cfg.backend : backend,
                       cfg.registry_file, cfg.cache_file, cfg.llm_table);
  const ValidationSet validation = load_validation_set(
      validation_path.empty() ? cfg.validation_path : validation_path,
      num_classes, cfg.target_label);

  FuzzReport report;
  if (!exhaustive_path.empty()) {
    report = run_exhaustive(load_vocab(exhaustive_path), validation,
                            *paraphraser, *model, cfg.fuzz.workers);
  } else {
    Thesaurus thesaurus = cfg.thesaurus_file.empty()
                              ? Thesaurus::builtin()
                              : Thesaurus::from_file(cfg.thesaurus_file);
    std::unique_ptr<LlmMutatorBackend> meta = make_meta_backend(cfg);
    report = run_fuzz(cfg.fuzz, validation, *paraphraser, *model, thesaurus,
                      meta.get());
  }
  save_json_file(out_path, fuzz_report_to_json(report, cfg.config_hash));
  Json side;
  side["wall_time_seconds"] = report.wall_time_seconds;
  save_json_file(out_path + ".meta.json", side);
  std::cout << "best prompt: \"" << report.best_prompt.suffix << "\" f1="
            << report.best_score.f1 << " stop=" << report.stop_reason
            << " mutants=" << report.total_mutants_evaluated << "\n";
  return 0;
}

int cmd_detect(const std::string& model_spec, const std::string& backend,
               const std::string& prompt_suffix, const std::string& report_path,
               const std::string& test_path, const std::string& out_path,
               const std::string& registry_file, const std::string& cache_file,
               size_t token_cap, int num_classes) {
  auto model = make_model(model_spec, num_classes);
  auto paraphraser =
      make_paraphraser(backend, registry_file, cache_file, TomlTable{});
  Prompt prompt{0, prompt_suffix, {}};
  if (!report_path.empty()) {
    const Json report = load_json_file(report_path);
    prompt.suffix = report.at("best_prompt").at("suffix").get<std::string>();
  }
  const auto test = load_dataset(test_path, num_classes).samples;
  const auto verdicts = detect(test, prompt, *paraphraser, *model, token_cap);
  Json meta;
  meta["prompt"] = prompt.suffix;
  save_verdicts(out_path, verdicts, meta);
  size_t flagged = 0, errored = 0;
  for (const auto& v : verdicts) {
    flagged += !v.errored && v.flagged_poisoned;
    errored += v.errored;
  }
  std::cout << "verdicts: " << verdicts.size() << " samples, " << flagged
            << " flagged poisoned, " << errored << " errored\n";
  return 0;
}

int cmd_eval(const std::string& verdicts_path, const std::string& test_path,
             const std::string& out_path, const std::string& model_name,
             const std::string& attack, int num_classes) {
  const auto verdicts = load_verdicts(verdicts_path);
  const auto test = load_dataset(test_path, num_classes).samples;
  const EvalSummary summary =
      evaluate_detection(verdicts, test, model_name, attack);
  std::ofstream csv(out_path);
  if (!csv) throw ConfigError("cannot write metrics: " + out_path);
  csv << kMetricsCsvHeader << "\n" << metrics_csv_row(summary) << "\n";
  std::cout << kMetricsCsvHeader << "\n" << metrics_csv_row(summary) << "\n";
  if (summary.errored > 0) {
    std::cout << "excluded " << summary.errored << " errored samples\n";
  }
  return 0;
}

int cmd_pipeline(const std::string& config_path, const std::string& out_dir) {
  RunConfig cfg = load_run_config(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  const int num_classes = static_cast<int>(cfg.labels.size());
  auto model = make_model(cfg.model_spec, num_classes);
  auto paraphraser = make_paraphraser(cfg.backend, cfg.registry_file,
                                      cfg.cache_file, cfg.llm_table);
  Thesaurus thesaurus = cfg.thesaurus_file.empty()
                            ? Thesaurus::builtin()
                            : Thesaurus::from_file(cfg.thesaurus_file);
  std::unique_ptr<LlmMutatorBackend> meta = make_meta_backend(cfg);
  const PipelineArtifacts artifacts =
      run_pipeline(cfg, *paraphraser, *model, thesaurus, meta.get());
  std::cout << "pipeline complete\n";
  std::cout << "  trigger:   [" << join_tokens(artifacts.trigger.tokens)
            << "] asr=" << artifacts.trigger.measured_asr << "\n";
  std::cout << "  prompt:    \"" << artifacts.fuzz_report.best_prompt.suffix
            << "\" (validation f1=" << artifacts.fuzz_report.best_score.f1
            << ", " << artifacts.fuzz_report.total_mutants_evaluated
            << " mutants, stop=" << artifacts.fuzz_report.stop_reason << ")\n";
  std::cout << "  test:      " << metrics_csv_row(artifacts.summary) << "\n";
  std::cout << "  artifacts: " << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "parry: paraphrase-based poisoned-input detection with "
      "coverage-guided prompt search"};
  app.require_subcommand(1);

  // simulate
  std::string sim_fixture = "badnets-word", sim_out = "fixture";
  uint64_t sim_seed = 7;
  int sim_val = 20, sim_test_clean = 200, sim_test_poison = 200;
  auto* sim = app.add_subcommand(
      "simulate", "generate a fixture dataset and simulated model");
  sim->add_option("--fixture", sim_fixture,
                  "badnets-word|badnets-phrase|badnets-char|positional|"
                  "ep-like-rare-word|style-proxy|syntax-proxy|clean");
  sim->add_option("--out", sim_out, "output directory")->required();
  sim->add_option("--seed", sim_seed, "generator seed");
  sim->add_option("--val-per-class", sim_val, "validation samples per class");
  sim->add_option("--test-clean", sim_test_clean, "clean test samples");
  sim->add_option("--test-poison", sim_test_poison, "poisoned test samples");
  bool sim_fifty = false;
  sim->add_flag("--val-fifty-fifty", sim_fifty,
                "validation of 50 clean and ~50 poisoned samples");

  // invert
  std::string inv_model, inv_victim, inv_vocab, inv_out = "trigger.json";
  int inv_target = 1, inv_beam = 16, inv_max_len = 7, inv_classes = 2;
  double inv_floor = 0.9;
  auto* inv = app.add_subcommand("invert",
                                 "search for a surrogate trigger");
  inv->add_option("--model", inv_model, "sim:<model.toml> or http:<url>")
      ->required();
  inv->add_option("--victim", inv_victim, "victim-class samples (jsonl)")
      ->required();
  inv->add_option("--vocab", inv_vocab, "vocabulary file")->required();
  inv->add_option("--out", inv_out, "output trigger.json");
  inv->add_option("--target", inv_target, "target label id");
  inv->add_option("--asr-floor", inv_floor, "acceptance ASR floor");
  inv->add_option("--beam", inv_beam, "beam width");
  inv->add_option("--max-len", inv_max_len, "max trigger tokens");
  inv->add_option("--num-classes", inv_classes, "label count");

  // craft
  std::string craft_model, craft_victim, craft_trigger,
      craft_out = "poison.jsonl";
  int craft_target = 1, craft_classes = 2;
  auto* craft = app.add_subcommand(
      "craft", "paste a surrogate trigger and keep the samples that fool the "
               "model");
  craft->add_option("--model", craft_model, "model spec")->required();
  craft->add_option("--victim", craft_victim, "victim samples")->required();
  craft->add_option("--trigger", craft_trigger, "trigger.json")->required();
  craft->add_option("--out", craft_out, "output poison.jsonl");
  craft->add_option("--target", craft_target, "target label id");
  craft->add_option("--num-classes", craft_classes, "label count");

  // fuzz
  std::string fz_config, fz_validation, fz_model, fz_backend,
      fz_out = "report.json", fz_space;
  auto* fz = app.add_subcommand("fuzz",
                                "coverage-guided prompt search");
  fz->add_option("--config", fz_config, "run config (toml)")->required();
  fz->add_option("--validation", fz_validation,
                 "combined clean+poison validation jsonl");
  fz->add_option("--model", fz_model, "model spec override");
  fz->add_option("--backend", fz_backend, "det|llm override");
  fz->add_option("--out", fz_out, "output report.json");
  fz->add_option("--exhaustive", fz_space,
                 "evaluate every prompt in this file instead of fuzzing");

  // detect
  std::string det_model, det_backend = "det", det_prompt, det_report,
              det_test, det_out = "verdicts.jsonl", det_registry, det_cache;
  size_t det_cap = 128;
  int det_classes = 2;
  auto* det = app.add_subcommand(
      "detect", "flag test samples whose prediction flips under paraphrase");
  det->add_option("--model", det_model, "model spec")->required();
  det->add_option("--backend", det_backend, "det|llm");
  det->add_option("--prompt", det_prompt, "prompt suffix to use");
  det->add_option("--report", det_report,
                  "take the best prompt from this report.json");
  det->add_option("--test", det_test, "test samples (jsonl)")->required();
  det->add_option("--out", det_out, "output verdicts.jsonl");
  det->add_option("--registry", det_registry, "style registry override");
  det->add_option("--cache", det_cache, "paraphrase cache file");
  det->add_option("--token-cap", det_cap, "chunking cap in tokens");
  det->add_option("--num-classes", det_classes, "label count");

  // eval
  std::string ev_verdicts, ev_test, ev_out = "metrics.csv",
              ev_model_name = "model", ev_attack = "attack";
  int ev_classes = 2;
  auto* ev = app.add_subcommand("eval",
                                "score verdicts against ground truth");
  ev->add_option("--verdicts", ev_verdicts, "verdicts.jsonl")->required();
  ev->add_option("--test", ev_test, "test samples with poisoned flags")
      ->required();
  ev->add_option("--out", ev_out, "output metrics.csv");
  ev->add_option("--model-name", ev_model_name, "row label");
  ev->add_option("--attack", ev_attack, "row label");
  ev->add_option("--num-classes", ev_classes, "label count");

  // pipeline
  std::string pl_config, pl_out;
  auto* pl = app.add_subcommand(
      "pipeline", "invert -> craft -> fuzz -> detect -> eval");
  pl->add_option("--config", pl_config, "run config (toml)")->required();
  pl->add_option("--out-dir", pl_out, "artifact directory override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return cmd_simulate(sim_fixture, sim_out, sim_seed, sim_val,
                          sim_test_clean, sim_test_poison, sim_fifty);
    }
    if (inv->parsed()) {
      return cmd_invert(inv_model, inv_victim, inv_vocab, inv_out, inv_target,
                        inv_floor, inv_beam, inv_max_len, inv_classes);
    }
    if (craft->parsed()) {
      return cmd_craft(craft_model, craft_victim, craft_trigger, craft_out,
                       craft_target, craft_classes);
    }
    if (fz->parsed()) {
      return cmd_fuzz(fz_config, fz_validation, fz_model, fz_backend, fz_out,
                      fz_space);
    }
    if (det->parsed()) {
      return cmd_detect(det_model, det_backend, det_prompt, det_report,
                        det_test, det_out, det_registry, det_cache, det_cap,
                        det_classes);
    }
    if (ev->parsed()) {
      return cmd_eval(ev_verdicts, ev_test, ev_out, ev_model_name, ev_attack,
                      ev_classes);
    }
    if (pl->parsed()) {
      return cmd_pipeline(pl_config, pl_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
