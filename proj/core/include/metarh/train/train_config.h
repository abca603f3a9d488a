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

#ifndef METARH_TRAIN_TRAIN_CONFIG_H_
#define METARH_TRAIN_TRAIN_CONFIG_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "metarh/model/config.h"
#include "metarh/sampler/episode_sampler.h"

namespace metarh::train {

// Training hyper-parameters plus the model architecture. Serialized as one
// flat JSON object so every field is addressable as `--name value`.
struct TrainConfig {
  model::ModelConfig model;  // tau, margin, beta and first_order live here

  int task_batch = 128;
  int query_batch = 3;
  double learning_rate = 1e-3;
  // Multiplies the learning rate of every dense tensor (encoders, scorer W2,
  // mask token); embedding rows use learning_rate as is.
  double dense_lr_scale = 1.0;
  int max_background = 10;  // L
  int k = 5;
  int num_negatives = 1;
  int max_steps = 1000;
  int eval_every = 50;
  int patience = 10;        // validations without improvement before stopping
  std::uint64_t seed = 0;
  int threads = 1;          // 1 = deterministic single-threaded mode
  std::string pretrained_embeddings;  // empty = random init
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  // Permits values outside the tuning grids (task_batch, query_batch,
  // learning_rate, L, margin, tau).
  bool allow_off_grid = false;

  void Validate() const;
  sampler::EpisodeConfig Episode() const;

  nlohmann::ordered_json ToJson() const;
  static TrainConfig FromJson(const nlohmann::json& json);
};

}  // namespace metarh::train

#endif  // METARH_TRAIN_TRAIN_CONFIG_H_
