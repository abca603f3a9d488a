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

#ifndef METARH_MODEL_CONFIG_H_
#define METARH_MODEL_CONFIG_H_

#include <string>

#include "json.hpp"

namespace metarh::model {

enum class Activation { kTanh, kIdentity, kLeakyRelu };

Activation ParseActivation(const std::string& name);
std::string ActivationName(Activation activation);

struct ModelConfig {
  int dim = 50;
  double tau = 0.9;            // relation weight when fusing qualifiers
  double leaky_slope = 0.01;
  Activation entity_activation = Activation::kTanh;

  int gran_layers = 2;
  int gran_heads = 2;
  int ffn_factor = 4;
  double dropout = 0.0;
  bool hard_mask = true;       // block attention across "unconnected" pairs

  // The scorer reuses the background encoder's W2 unless unshared.
  bool share_w2 = true;
  // Feed background-enhanced representations for qualifier values too.
  bool enhance_values = false;

  double margin = 1.0;
  double beta = 0.1;           // adjustment step size
  bool first_order = false;    // detach the adjustment gradient

  // Ablation switches.
  bool use_background = true;
  bool use_adjustment = true;

  void Validate() const;
  nlohmann::ordered_json ToJson() const;
  static ModelConfig FromJson(const nlohmann::json& json);
};

}  // namespace metarh::model

#endif  // METARH_MODEL_CONFIG_H_
