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

#include "metarh/train/trainer.h"

#include <spdlog/spdlog.h>

#include <cmath>
#include <limits>
#include <thread>

#include "metarh/common/error.h"
#include "metarh/common/rng.h"
#include "metarh/train/pretrained.h"

namespace metarh::train {
namespace {

constexpr std::uint64_t kModelStream = 0x6d6f64656cULL;
constexpr std::uint64_t kBatchStream = 0xba7cULL;
constexpr std::uint64_t kDropoutStream = 0xd40ULL;
constexpr int kMaxConsecutiveNonFinite = 3;

void MergeInto(ad::GradientMap& into, const ad::GradientMap& from) {
  for (const auto& [node, g] : from) {
    auto [it, inserted] = into.try_emplace(node, g);
    if (!inserted) it->second += g;
  }
}

}  // namespace

Trainer::Trainer(const KnowledgeStore& store, const TrainConfig& config)
    : store_(store), config_(config) {
  config_.Validate();
  model_ = std::make_unique<model::MetaRHModel>(
      config_.model, store.vocab().num_entities(), store.vocab().num_relations(),
      MixSeed(config_.seed, kModelStream));
  if (!config_.pretrained_embeddings.empty()) {
    LoadPretrainedEmbeddings(config_.pretrained_embeddings, store.vocab(),
                             model_->params());
  }
  AdamConfig adam;
  adam.learning_rate = config_.learning_rate;
  adam.beta1 = config_.adam_beta1;
  adam.beta2 = config_.adam_beta2;
  adam.epsilon = config_.adam_epsilon;
  const model::Parameters& params = model_->params();
  ParamGroup embeddings{{}, config_.learning_rate};
  embeddings.leaves = params.entities.rows();
  embeddings.leaves.insert(embeddings.leaves.end(), params.relations.rows().begin(),
                           params.relations.rows().end());
  ParamGroup dense{{}, config_.learning_rate * config_.dense_lr_scale};
  for (const model::NamedTensor& t : params.DenseTensors()) {
    dense.leaves.push_back(t.var);
  }
  adam_ = std::make_unique<Adam>(
      std::vector<ParamGroup>{std::move(embeddings), std::move(dense)}, adam);

  const auto& tasks = store.tasks(Split::kTrain);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].facts.size() > static_cast<std::size_t>(config_.k)) {
      eligible_.push_back(i);
    }
  }
  if (eligible_.empty()) {
    throw Error(ErrorClass::kEpisode,
                "no training task has more than k facts");
  }
}

double Trainer::TaskLosses(std::span<const std::size_t> picks, int step,
                           std::size_t offset, ad::GradientMap& grads) const {
  const auto& tasks = store_.tasks(Split::kTrain);
  const sampler::EpisodeConfig episode_config = config_.Episode();
  double total = 0.0;
  for (std::size_t j = 0; j < picks.size(); ++j) {
    const std::size_t slot = offset + j;
    sampler::FewShotTask episode =
        sampler::SampleEpisode(store_, tasks[picks[j]], episode_config,
                               config_.seed, static_cast<std::uint64_t>(step), slot);
    Rng dropout(MixSeed(config_.seed, kDropoutStream ^ slot,
                        static_cast<std::uint64_t>(step)));
    model::MetaRHModel::TaskOutput out;
    try {
      out = model_->Forward(episode, store_.background(),
                            config_.model.dropout > 0.0 ? &dropout : nullptr);
    } catch (const Error& e) {
      if (e.error_class() != ErrorClass::kNumeric) throw;
      return std::numeric_limits<double>::quiet_NaN();
    }
    const double loss = out.query_loss.item();
    if (!std::isfinite(loss)) return loss;
    total += loss;
    if (loss > 0.0) ad::BackwardInto(out.query_loss, grads);
  }
  return total;
}

double Trainer::Step(int step) {
  Rng batch_rng(MixSeed(config_.seed, kBatchStream, static_cast<std::uint64_t>(step)));
  std::vector<std::size_t> picks(config_.task_batch);
  for (std::size_t& p : picks) p = eligible_[batch_rng.UniformIndex(eligible_.size())];

  ad::GradientMap grads;
  double total = 0.0;
  const std::size_t workers =
      std::min<std::size_t>(config_.threads, picks.size());
  if (workers <= 1) {
    total = TaskLosses(picks, step, 0, grads);
  } else {
    std::vector<ad::GradientMap> partial(workers);
    std::vector<double> losses(workers, 0.0);
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (picks.size() + workers - 1) / workers;
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(picks.size(), w * chunk);
        const std::size_t end = std::min(picks.size(), begin + chunk);
        pool.emplace_back([&, w, begin, end] {
          try {
            losses[w] = TaskLosses(
                std::span<const std::size_t>(picks).subspan(begin, end - begin),
                step, begin, partial[w]);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (std::size_t w = 0; w < workers; ++w) {
      total += losses[w];
      MergeInto(grads, partial[w]);
    }
  }

  if (!std::isfinite(total)) {
    ++consecutive_non_finite_;
    spdlog::warn("step {}: non-finite loss, update skipped", step);
    if (consecutive_non_finite_ >= kMaxConsecutiveNonFinite) {
      throw Error(ErrorClass::kNumeric,
                  "three consecutive steps produced non-finite losses");
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
  consecutive_non_finite_ = 0;
  if (total > 0.0) adam_->Step(grads);
  return total;
}

EvalOptions Trainer::EvaluationOptions() const {
  EvalOptions options;
  options.episode = config_.Episode();
  options.seed = config_.seed;
  options.threads = config_.threads;
  return options;
}

EvalReport Trainer::EvaluateSplit(Split split) const {
  return Evaluate(*model_, store_, store_.tasks(split), EvaluationOptions());
}

TrainResult Trainer::Train(const StepCallback& on_step) {
  TrainResult result;
  const bool can_validate = !store_.tasks(Split::kValid).empty();
  std::vector<ad::Matrix> best;
  int stale = 0;
  for (int step = 1; step <= config_.max_steps; ++step) {
    const double loss = Step(step);
    result.loss_curve.push_back(loss);
    result.steps_run = step;
    if (!std::isfinite(loss)) ++result.skipped_steps;
    if (on_step) on_step(step, loss);

    const bool due = step % config_.eval_every == 0 || step == config_.max_steps;
    if (!can_validate || !due) continue;
    const double mrr = EvaluateSplit(Split::kValid).overall.mrr;
    result.validations.push_back({step, mrr});
    spdlog::info("step {}: loss {:.4f}, valid MRR {:.4f}", step, loss, mrr);
    if (mrr > result.best_valid_mrr) {
      result.best_valid_mrr = mrr;
      result.best_step = step;
      best = model_->params().Snapshot();
      stale = 0;
    } else if (++stale >= config_.patience) {
      result.early_stopped = true;
      break;
    }
  }
  if (!best.empty()) model_->params().Restore(best);
  return result;
}

}  // namespace metarh::train
