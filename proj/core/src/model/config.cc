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

#include "metarh/model/config.h"

#include "metarh/common/error.h"

namespace metarh::model {

Activation ParseActivation(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  if (name == "leaky_relu") return Activation::kLeakyRelu;
  throw Error(ErrorClass::kConfig, "unknown activation '" + name + "'");
}

std::string ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kTanh:
      return "tanh";
    case Activation::kIdentity:
      return "identity";
    case Activation::kLeakyRelu:
      return "leaky_relu";
  }
  return "tanh";
}

void ModelConfig::Validate() const {
  if (dim <= 0 || dim % 2 != 0) {
    throw Error(ErrorClass::kConfig, "embedding dim must be positive and even");
  }
  if (tau < 0.0 || tau > 1.0) {
    throw Error(ErrorClass::kConfig, "tau must lie in [0, 1]");
  }
  if (gran_layers < 1) throw Error(ErrorClass::kConfig, "gran_layers must be >= 1");
  if (gran_heads < 1 || dim % gran_heads != 0) {
    throw Error(ErrorClass::kConfig, "gran_heads must divide dim");
  }
  if (ffn_factor < 1) throw Error(ErrorClass::kConfig, "ffn_factor must be >= 1");
  if (dropout < 0.0 || dropout >= 1.0) {
    throw Error(ErrorClass::kConfig, "dropout must lie in [0, 1)");
  }
  if (margin < 0.0) throw Error(ErrorClass::kConfig, "margin must be >= 0");
  if (beta < 0.0) throw Error(ErrorClass::kConfig, "beta must be >= 0");
}

nlohmann::ordered_json ModelConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["dim"] = dim;
  j["tau"] = tau;
  j["leaky_slope"] = leaky_slope;
  j["entity_activation"] = ActivationName(entity_activation);
  j["gran_layers"] = gran_layers;
  j["gran_heads"] = gran_heads;
  j["ffn_factor"] = ffn_factor;
  j["dropout"] = dropout;
  j["hard_mask"] = hard_mask;
  j["share_w2"] = share_w2;
  j["enhance_values"] = enhance_values;
  j["margin"] = margin;
  j["beta"] = beta;
  j["first_order"] = first_order;
  j["use_background"] = use_background;
  j["use_adjustment"] = use_adjustment;
  return j;
}

ModelConfig ModelConfig::FromJson(const nlohmann::json& json) {
  ModelConfig c;
  try {
    c.dim = json.value("dim", c.dim);
    c.tau = json.value("tau", c.tau);
    c.leaky_slope = json.value("leaky_slope", c.leaky_slope);
    if (json.contains("entity_activation")) {
      c.entity_activation =
          ParseActivation(json.at("entity_activation").get<std::string>());
    }
    c.gran_layers = json.value("gran_layers", c.gran_layers);
    c.gran_heads = json.value("gran_heads", c.gran_heads);
    c.ffn_factor = json.value("ffn_factor", c.ffn_factor);
    c.dropout = json.value("dropout", c.dropout);
    c.hard_mask = json.value("hard_mask", c.hard_mask);
    c.share_w2 = json.value("share_w2", c.share_w2);
    c.enhance_values = json.value("enhance_values", c.enhance_values);
    c.margin = json.value("margin", c.margin);
    c.beta = json.value("beta", c.beta);
    c.first_order = json.value("first_order", c.first_order);
    c.use_background = json.value("use_background", c.use_background);
    c.use_adjustment = json.value("use_adjustment", c.use_adjustment);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorClass::kConfig, std::string("model config: ") + e.what());
  }
  c.Validate();
  return c;
}

}  // namespace metarh::model
