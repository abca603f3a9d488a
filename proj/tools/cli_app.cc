/*
 * Copyright 2026 The MetaRH Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli_app.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "metarh/common/error.h"
#include "metarh/common/hashing.h"
#include "metarh/common/json_config.h"
#include "metarh/common/rng.h"
#include "metarh/dataset/builder.h"
#include "metarh/hkg/fact_io.h"
#include "metarh/model/meta_scorer.h"
#include "metarh/sampler/episode_sampler.h"
#include "metarh/train/checkpoint.h"
#include "metarh/train/evaluator.h"
#include "metarh/train/trainer.h"

namespace metarh::cli {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

int ExitCodeFor(ErrorClass error_class) {
  switch (error_class) {
    case ErrorClass::kConfig:
      return kExitUsage;
    case ErrorClass::kParse:
    case ErrorClass::kSchema:
    case ErrorClass::kConsistency:
    case ErrorClass::kLeakage:
    case ErrorClass::kBuild:
    case ErrorClass::kInput:
    case ErrorClass::kLoad:
    case ErrorClass::kChecksum:
      return kExitData;
    default:
      return kExitRuntime;
  }
}

std::vector<Prediction> Predict(const model::MetaRHModel& model,
                                const KnowledgeStore& store,
                                const std::vector<HyperFact>& support,
                                const std::vector<HyperFact>& queries,
                                int max_background, int num_negatives,
                                std::uint64_t seed, std::size_t top_n) {
  if (support.empty()) {
    throw Error(ErrorClass::kInput, "support file holds no facts");
  }
  const RelationId relation = support.front().relation;
  auto mismatch = [&](const HyperFact& f) { return f.relation != relation; };
  if (std::any_of(support.begin(), support.end(), mismatch) ||
      std::any_of(queries.begin(), queries.end(), mismatch)) {
    throw Error(ErrorClass::kInput,
                "support and query facts must share one relation");
  }
  sampler::FewShotTask task;
  task.relation = relation;
  task.support = support;
  Rng rng(MixSeed(seed, 0x9ed1c7ULL, Index(relation)));
  for (const HyperFact& fact : support) {
    for (EntityId e : {fact.head, fact.tail}) {
      if (task.background_sample.contains(e)) continue;
      task.background_sample[e] =
          sampler::SampleBackground(store.background(), e, max_background, rng);
    }
    if (model.config().enhance_values) {
      for (const Qualifier& q : fact.qualifiers) {
        if (task.background_sample.contains(q.value)) continue;
        task.background_sample[q.value] = sampler::SampleBackground(
            store.background(), q.value, max_background, rng);
      }
    }
  }
  std::span<const EntityId> candidates = store.Candidates(relation);
  for (const HyperFact& fact : support) {
    task.support_negatives.push_back(sampler::CorruptTail(
        fact, candidates, store.KnownTails(fact), num_negatives, rng));
  }
  const Eigen::VectorXd adapted = model.AdaptRelation(task, store.background());

  std::vector<Prediction> out;
  for (const HyperFact& query : queries) {
    std::vector<double> scores = model.ScoreCandidates(query, adapted, candidates);
    Prediction p;
    p.query = query;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      p.ranking.emplace_back(candidates[i], scores[i]);
    }
    std::stable_sort(p.ranking.begin(), p.ranking.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    if (p.ranking.size() > top_n) p.ranking.resize(top_n);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// `--name value` for every key of a config object.
struct Overrides {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void Register(CLI::App* app, const ordered_json& defaults) {
    for (const auto& item : defaults.items()) {
      CLI::Option* opt = app->add_option("--" + item.key(), values[item.key()],
                                         "override (default " +
                                             item.value().dump() + ")");
      opt->group("Config overrides");
      options[item.key()] = opt;
    }
  }
  bool Given(const std::string& key) const {
    auto it = options.find(key);
    return it != options.end() && it->second->count() > 0;
  }
  void ApplyTo(ordered_json& config) const {
    for (const auto& [key, option] : options) {
      if (option->count() > 0) ApplyOverride(config, key, values.at(key));
    }
  }
};

// Defaults, then the config file, then flags; the seed key falls back to
// METARH_SEED when neither the file nor a flag sets it.
ordered_json EffectiveConfig(const ordered_json& defaults,
                             const std::string& config_path,
                             const Overrides& overrides,
                             const std::string& seed_key) {
  ordered_json config = defaults;
  bool seed_set = false;
  if (!config_path.empty()) {
    nlohmann::json file = ReadJsonFile(config_path);
    RejectUnknownKeys(file, defaults, "config file");
    for (const auto& item : file.items()) config[item.key()] = item.value();
    seed_set = file.contains(seed_key);
  }
  if (!seed_set && !overrides.Given(seed_key)) {
    if (const char* env = std::getenv("METARH_SEED"); env && *env) {
      ApplyOverride(config, seed_key, env);
    }
  }
  overrides.ApplyTo(config);
  return config;
}

void AppendRunLog(const std::string& path, const std::string& command,
                  const ordered_json& config, std::uint64_t seed,
                  const std::vector<fs::path>& inputs) {
  ordered_json entry;
  entry["time"] = std::chrono::duration_cast<std::chrono::seconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
  entry["command"] = command;
  entry["seed"] = seed;
  entry["config"] = config;
  ordered_json hashes = ordered_json::object();
  for (const fs::path& p : inputs) {
    if (fs::is_regular_file(p)) hashes[p.string()] = GitBlobHashOfFile(p);
  }
  entry["inputs"] = std::move(hashes);
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(ErrorClass::kIo, "cannot append to run log " + path);
  out << entry.dump() << '\n';
}

std::vector<fs::path> DatasetFiles(const fs::path& dir) {
  return {dir / "vocab.json", dir / "tasks" / "train.json",
          dir / "tasks" / "valid.json", dir / "tasks" / "test.json",
          dir / "background.jsonl", dir / "candidates.json"};
}

void EmitJson(const ordered_json& json, const std::string& out_path) {
  std::cout << json.dump(2) << std::endl;
  if (!out_path.empty()) WriteJsonFile(out_path, json);
}

}  // namespace

int Run(int argc, char** argv) {
  CLI::App app{"MetaRH: few-shot link prediction on hyper-relational facts"};
  app.require_subcommand(1);
  std::string run_log = "metarh_runs.jsonl";
  app.add_option("--run-log", run_log, "append-only run log (JSON lines)");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "log progress to stderr");

  // build-dataset
  CLI::App* build = app.add_subcommand("build-dataset",
                                       "select few-shot relations and split a corpus");
  std::string corpus_path, dataset_out, build_config_path;
  build->add_option("--corpus", corpus_path, "JSON-lines corpus")->required();
  build->add_option("--out", dataset_out, "output directory")->required();
  build->add_option("--config", build_config_path, "JSON build config");
  Overrides build_overrides;
  build_overrides.Register(build, dataset::BuildConfig{}.ToJson());

  // train
  CLI::App* train = app.add_subcommand("train", "meta-train on a built dataset");
  std::string train_data, train_ckpt, train_config_path, loss_log;
  train->add_option("--data", train_data, "dataset directory")->required();
  train->add_option("--checkpoint", train_ckpt, "output checkpoint")->required();
  train->add_option("--config", train_config_path, "JSON train config");
  train->add_option("--loss-log", loss_log, "write per-step losses here");
  Overrides train_overrides;
  train_overrides.Register(train, train::TrainConfig{}.ToJson());

  // evaluate
  CLI::App* evaluate = app.add_subcommand("evaluate", "rank queries of a split");
  std::string eval_data, eval_ckpt, eval_split = "test", eval_out;
  bool macro = false;
  int eval_threads = 1;
  evaluate->add_option("--data", eval_data, "dataset directory")->required();
  evaluate->add_option("--checkpoint", eval_ckpt, "checkpoint")->required();
  evaluate->add_option("--split", eval_split, "train, valid or test")
      ->check(CLI::IsMember({"train", "valid", "test"}));
  evaluate->add_option("--out", eval_out, "also write the report here");
  evaluate->add_flag("--macro", macro, "average over relations, not queries");
  evaluate->add_option("--threads", eval_threads, "query-parallel workers")
      ->check(CLI::PositiveNumber);

  // predict
  CLI::App* predict = app.add_subcommand("predict", "rank tails for new queries");
  std::string pred_data, pred_ckpt, support_path, query_path, pred_out;
  std::size_t top_n = 10;
  predict->add_option("--data", pred_data, "dataset directory")->required();
  predict->add_option("--checkpoint", pred_ckpt, "checkpoint")->required();
  predict->add_option("--support", support_path, "support facts (JSON lines)")
      ->required();
  predict->add_option("--queries", query_path, "queries with \"t\": null")
      ->required();
  predict->add_option("--top-n", top_n, "candidates per query")
      ->check(CLI::PositiveNumber);
  predict->add_option("--out", pred_out, "also write predictions here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    if (*build) {
      ordered_json cfg_json = EffectiveConfig(dataset::BuildConfig{}.ToJson(),
                                              build_config_path, build_overrides,
                                              "rng_seed");
      dataset::BuildConfig cfg = dataset::BuildConfig::FromJson(cfg_json);
      AppendRunLog(run_log, "build-dataset", cfg_json, cfg.rng_seed,
                   {corpus_path, build_config_path});
      Vocabulary vocab;
      std::vector<HyperFact> corpus = ReadFactsFile(corpus_path, vocab);
      dataset::BuiltDataset built = dataset::BuildDataset(corpus, vocab, cfg);
      dataset::WriteDataset(built, dataset_out);
      std::cout << built.stats.ToJson().dump(2) << std::endl;
      return kExitOk;
    }

    if (*train) {
      ordered_json cfg_json = EffectiveConfig(train::TrainConfig{}.ToJson(),
                                              train_config_path, train_overrides,
                                              "seed");
      train::TrainConfig cfg = train::TrainConfig::FromJson(cfg_json);
      std::vector<fs::path> inputs = DatasetFiles(train_data);
      inputs.emplace_back(train_config_path);
      inputs.emplace_back(cfg.pretrained_embeddings);
      AppendRunLog(run_log, "train", cfg.ToJson(), cfg.seed, inputs);
      KnowledgeStore store = KnowledgeStore::Load(train_data);
      train::Trainer trainer(store, cfg);
      train::TrainResult result = trainer.Train([](int step, double loss) {
        spdlog::info("step {} loss {:.6f}", step, loss);
      });
      train::SaveCheckpoint(train_ckpt, trainer.model(), cfg,
                            store.vocab().Fingerprint(), result.steps_run);
      if (!loss_log.empty()) {
        std::ofstream out(loss_log);
        out.precision(17);
        for (double loss : result.loss_curve) out << loss << '\n';
      }
      ordered_json summary;
      summary["steps"] = result.steps_run;
      summary["skipped_steps"] = result.skipped_steps;
      summary["best_step"] = result.best_step;
      summary["best_valid_mrr"] = result.best_valid_mrr;
      summary["early_stopped"] = result.early_stopped;
      summary["final_loss"] =
          result.loss_curve.empty() ? 0.0 : result.loss_curve.back();
      std::cout << summary.dump(2) << std::endl;
      return kExitOk;
    }

    if (*evaluate) {
      KnowledgeStore store = KnowledgeStore::Load(eval_data);
      train::LoadedModel loaded =
          train::LoadCheckpoint(eval_ckpt, store.vocab().Fingerprint());
      std::vector<fs::path> inputs = DatasetFiles(eval_data);
      inputs.emplace_back(eval_ckpt);
      ordered_json cfg_json = loaded.config.ToJson();
      cfg_json["split"] = eval_split;
      cfg_json["macro"] = macro;
      AppendRunLog(run_log, "evaluate", cfg_json, loaded.config.seed, inputs);
      train::EvalOptions options;
      options.episode = loaded.config.Episode();
      options.seed = loaded.config.seed;
      options.macro = macro;
      options.threads = eval_threads;
      train::EvalReport report =
          train::Evaluate(*loaded.model, store, store.tasks(ParseSplit(eval_split)),
                          options);
      EmitJson(report.ToJson(), eval_out);
      return kExitOk;
    }

    if (*predict) {
      KnowledgeStore store = KnowledgeStore::Load(pred_data);
      train::LoadedModel loaded =
          train::LoadCheckpoint(pred_ckpt, store.vocab().Fingerprint());
      std::vector<fs::path> inputs = DatasetFiles(pred_data);
      inputs.insert(inputs.end(), {pred_ckpt, support_path, query_path});
      ordered_json cfg_json = loaded.config.ToJson();
      cfg_json["top_n"] = top_n;
      AppendRunLog(run_log, "predict", cfg_json, loaded.config.seed, inputs);

      Vocabulary vocab = store.vocab();
      const std::size_t entities = vocab.num_entities();
      const std::size_t relations = vocab.num_relations();
      std::vector<HyperFact> support = ReadFactsFile(support_path, vocab);
      std::vector<HyperFact> queries =
          ReadFactsFile(query_path, vocab, ParseOptions{.allow_missing_tail = true});
      if (vocab.num_entities() != entities || vocab.num_relations() != relations) {
        throw Error(ErrorClass::kInput,
                    "support or query files mention symbols outside the dataset");
      }
      std::vector<Prediction> predictions =
          Predict(*loaded.model, store, support, queries,
                  loaded.config.max_background, loaded.config.num_negatives,
                  loaded.config.seed, top_n);
      ordered_json out = ordered_json::array();
      for (const Prediction& p : predictions) {
        ordered_json item;
        item["head"] = vocab.EntitySymbol(p.query.head);
        item["relation"] = vocab.RelationSymbol(p.query.relation);
        ordered_json ranked = ordered_json::array();
        for (const auto& [entity, score] : p.ranking) {
          ranked.push_back({{"entity", vocab.EntitySymbol(entity)}, {"score", score}});
        }
        item["ranking"] = std::move(ranked);
        out.push_back(std::move(item));
      }
      EmitJson(out, pred_out);
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error " << ErrorClassName(e.error_class()) << ": " << e.what()
              << std::endl;
    return ExitCodeFor(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "error runtime_error: " << e.what() << std::endl;
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace metarh::cli
