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

#ifndef METARH_TRAIN_ADAM_H_
#define METARH_TRAIN_ADAM_H_

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "metarh/autodiff/var.h"

namespace metarh::train {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Leaves sharing one learning rate.
struct ParamGroup {
  std::vector<ad::Var> leaves;
  double learning_rate = 1e-3;
};

// Adaptive-moment optimizer over a fixed set of leaves. A leaf absent from
// the gradient map is left untouched, moments and step count included.
class Adam {
 public:
  Adam(std::vector<ad::Var> leaves, const AdamConfig& config);
  // Per-group learning rates; config.learning_rate is ignored.
  Adam(std::vector<ParamGroup> groups, const AdamConfig& config);

  // Returns the number of leaves updated.
  std::size_t Step(const ad::GradientMap& grads);

  std::int64_t steps() const { return steps_; }

 private:
  struct State {
    ad::Matrix m;
    ad::Matrix v;
    std::int64_t t = 0;
  };
  std::vector<std::pair<ad::Var, double>> leaves_;  // leaf, learning rate
  AdamConfig config_;
  std::unordered_map<const ad::Node*, State> state_;
  std::int64_t steps_ = 0;
};

}  // namespace metarh::train

#endif  // METARH_TRAIN_ADAM_H_
