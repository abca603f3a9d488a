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

#include "metarh/train/train_config.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "metarh/common/error.h"
#include "metarh/common/json_config.h"

namespace metarh::train {
namespace {

constexpr std::array<int, 5> kTaskBatches{128, 256, 512, 1024, 2048};
constexpr std::array<double, 4> kLearningRates{5e-3, 1e-3, 5e-4, 1e-4};
constexpr std::array<int, 4> kBackgroundSizes{10, 20, 30, 50};

template <typename T, std::size_t N>
bool OnGrid(const std::array<T, N>& grid, T value) {
  return std::any_of(grid.begin(), grid.end(), [&](T g) {
    return std::abs(static_cast<double>(g) - static_cast<double>(value)) <=
           1e-12 * std::max(1.0, std::abs(static_cast<double>(g)));
  });
}

bool IsIntegral(double x) { return std::abs(x - std::round(x)) <= 1e-12; }

void Require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorClass::kConfig, message);
}

}  // namespace

void TrainConfig::Validate() const {
  model.Validate();
  Require(task_batch >= 1, "task_batch must be >= 1");
  Require(query_batch >= 1, "query_batch must be >= 1");
  Require(learning_rate > 0.0, "learning_rate must be positive");
  Require(dense_lr_scale > 0.0, "dense_lr_scale must be positive");
  Require(max_background >= 0, "max_background must be >= 0");
  Require(k >= 1, "k must be >= 1");
  Require(num_negatives >= 1, "num_negatives must be >= 1");
  Require(max_steps >= 0, "max_steps must be >= 0");
  Require(eval_every >= 1, "eval_every must be >= 1");
  Require(patience >= 1, "patience must be >= 1");
  Require(threads >= 1, "threads must be >= 1");
  Require(adam_beta1 >= 0.0 && adam_beta1 < 1.0, "adam_beta1 must lie in [0, 1)");
  Require(adam_beta2 >= 0.0 && adam_beta2 < 1.0, "adam_beta2 must lie in [0, 1)");
  Require(adam_epsilon > 0.0, "adam_epsilon must be positive");
  if (allow_off_grid) return;
  const std::string hint = " (set allow_off_grid to override)";
  Require(OnGrid(kTaskBatches, task_batch),
          "task_batch must be one of 128, 256, 512, 1024, 2048" + hint);
  Require(query_batch <= 5, "query_batch must lie in 1..5" + hint);
  Require(OnGrid(kLearningRates, learning_rate),
          "learning_rate must be one of 5e-3, 1e-3, 5e-4, 1e-4" + hint);
  Require(OnGrid(kBackgroundSizes, max_background),
          "max_background must be one of 10, 20, 30, 50" + hint);
  Require(IsIntegral(model.margin) && model.margin >= 1 && model.margin <= 5,
          "margin must be an integer in 1..5" + hint);
  Require(IsIntegral(model.tau * 10.0), "tau must be a multiple of 0.1" + hint);
}

sampler::EpisodeConfig TrainConfig::Episode() const {
  sampler::EpisodeConfig episode;
  episode.k = k;
  episode.query_batch = query_batch;
  episode.max_background = max_background;
  episode.num_negatives = num_negatives;
  episode.sample_value_background = model.enhance_values;
  return episode;
}

nlohmann::ordered_json TrainConfig::ToJson() const {
  nlohmann::ordered_json j = model.ToJson();
  j["task_batch"] = task_batch;
  j["query_batch"] = query_batch;
  j["learning_rate"] = learning_rate;
  j["dense_lr_scale"] = dense_lr_scale;
  j["max_background"] = max_background;
  j["k"] = k;
  j["num_negatives"] = num_negatives;
  j["max_steps"] = max_steps;
  j["eval_every"] = eval_every;
  j["patience"] = patience;
  j["seed"] = seed;
  j["threads"] = threads;
  j["pretrained_embeddings"] = pretrained_embeddings;
  j["adam_beta1"] = adam_beta1;
  j["adam_beta2"] = adam_beta2;
  j["adam_epsilon"] = adam_epsilon;
  j["allow_off_grid"] = allow_off_grid;
  return j;
}

TrainConfig TrainConfig::FromJson(const nlohmann::json& json) {
  TrainConfig c;
  RejectUnknownKeys(json, c.ToJson(), "train config");
  c.model = model::ModelConfig::FromJson(json);
  try {
    c.task_batch = json.value("task_batch", c.task_batch);
    c.query_batch = json.value("query_batch", c.query_batch);
    c.learning_rate = json.value("learning_rate", c.learning_rate);
    c.dense_lr_scale = json.value("dense_lr_scale", c.dense_lr_scale);
    c.max_background = json.value("max_background", c.max_background);
    c.k = json.value("k", c.k);
    c.num_negatives = json.value("num_negatives", c.num_negatives);
    c.max_steps = json.value("max_steps", c.max_steps);
    c.eval_every = json.value("eval_every", c.eval_every);
    c.patience = json.value("patience", c.patience);
    c.seed = json.value("seed", c.seed);
    c.threads = json.value("threads", c.threads);
    c.pretrained_embeddings =
        json.value("pretrained_embeddings", c.pretrained_embeddings);
    c.adam_beta1 = json.value("adam_beta1", c.adam_beta1);
    c.adam_beta2 = json.value("adam_beta2", c.adam_beta2);
    c.adam_epsilon = json.value("adam_epsilon", c.adam_epsilon);
    c.allow_off_grid = json.value("allow_off_grid", c.allow_off_grid);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorClass::kConfig, std::string("train config: ") + e.what());
  }
  c.Validate();
  return c;
}

}  // namespace metarh::train
