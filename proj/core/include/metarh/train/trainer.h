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

#ifndef METARH_TRAIN_TRAINER_H_
#define METARH_TRAIN_TRAINER_H_

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "metarh/hkg/knowledge_store.h"
#include "metarh/model/metarh_model.h"
#include "metarh/train/adam.h"
#include "metarh/train/evaluator.h"
#include "metarh/train/train_config.h"

namespace metarh::train {

struct ValidationPoint {
  int step = 0;
  double mrr = 0.0;
};

struct TrainResult {
  std::vector<double> loss_curve;  // summed query loss per step; NaN if skipped
  std::vector<ValidationPoint> validations;
  int steps_run = 0;
  int skipped_steps = 0;
  int best_step = -1;           // -1 when no validation ran
  double best_valid_mrr = -1.0;
  bool early_stopped = false;
};

// Episodic meta-training: each step samples a task batch, sums the query
// losses after adjustment, and takes one Adam step over all parameters.
class Trainer {
 public:
  using StepCallback = std::function<void(int step, double loss)>;

  Trainer(const KnowledgeStore& store, const TrainConfig& config);

  model::MetaRHModel& model() { return *model_; }
  const model::MetaRHModel& model() const { return *model_; }
  const TrainConfig& config() const { return config_; }

  // Runs up to max_steps and leaves the model at the best validation MRR.
  TrainResult Train(const StepCallback& on_step = {});

  // One optimizer step; returns the summed loss (NaN when skipped).
  double Step(int step);

  EvalOptions EvaluationOptions() const;
  EvalReport EvaluateSplit(Split split) const;

 private:
  double TaskLosses(std::span<const std::size_t> picks, int step,
                    std::size_t offset, ad::GradientMap& grads) const;

  const KnowledgeStore& store_;
  TrainConfig config_;
  std::unique_ptr<model::MetaRHModel> model_;
  std::unique_ptr<Adam> adam_;
  std::vector<std::size_t> eligible_;  // training tasks with more than k facts
  int consecutive_non_finite_ = 0;
};

}  // namespace metarh::train

#endif  // METARH_TRAIN_TRAINER_H_
