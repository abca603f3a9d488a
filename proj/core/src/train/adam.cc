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

#include "metarh/train/adam.h"

#include <cmath>

namespace metarh::train {

Adam::Adam(std::vector<ad::Var> leaves, const AdamConfig& config)
    : config_(config) {
  for (ad::Var& leaf : leaves) leaves_.emplace_back(std::move(leaf), config.learning_rate);
}

Adam::Adam(std::vector<ParamGroup> groups, const AdamConfig& config)
    : config_(config) {
  for (ParamGroup& group : groups) {
    for (ad::Var& leaf : group.leaves) {
      leaves_.emplace_back(std::move(leaf), group.learning_rate);
    }
  }
}

std::size_t Adam::Step(const ad::GradientMap& grads) {
  ++steps_;
  std::size_t updated = 0;
  for (auto& [leaf, learning_rate] : leaves_) {
    auto it = grads.find(leaf.node());
    if (it == grads.end()) continue;
    const ad::Matrix& g = it->second;
    State& s = state_[leaf.node()];
    if (s.t == 0) {
      s.m = ad::Matrix::Zero(g.rows(), g.cols());
      s.v = ad::Matrix::Zero(g.rows(), g.cols());
    }
    ++s.t;
    s.m = config_.beta1 * s.m + (1.0 - config_.beta1) * g;
    s.v = config_.beta2 * s.v + (1.0 - config_.beta2) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(s.t));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(s.t));
    const double step = learning_rate / c1;
    ad::Matrix denom = (s.v / c2).cwiseSqrt().array() + config_.epsilon;
    leaf.mutable_leaf_value() -= step * s.m.cwiseQuotient(denom);
    ++updated;
  }
  return updated;
}

}  // namespace metarh::train
