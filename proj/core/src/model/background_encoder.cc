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

#include "metarh/model/background_encoder.h"

#include "metarh/common/error.h"

namespace metarh::model {

using ad::Var;

Var Rotate(const Var& attribute, const Var& value) {
  const Eigen::Index dim = value.rows();
  if (dim % 2 != 0 || attribute.rows() != dim) {
    throw Error(ErrorClass::kConfig,
                "rotation needs matching even-dimensional vectors");
  }
  const Eigen::Index half = dim / 2;
  Var theta = ad::Slice(attribute, 0, 0, half, 1);
  Var re = ad::Slice(value, 0, 0, half, 1);
  Var im = ad::Slice(value, half, 0, half, 1);
  Var cos_t = ad::Cos(theta);
  Var sin_t = ad::Sin(theta);
  Var out_re = ad::Sub(ad::Mul(re, cos_t), ad::Mul(im, sin_t));
  Var out_im = ad::Add(ad::Mul(re, sin_t), ad::Mul(im, cos_t));
  return ad::ConcatRows({out_re, out_im});
}

Var QualifierSum(std::span<const QualifierVars> pairs, int dim) {
  if (pairs.empty()) return ad::Zeros(dim, 1);
  Var sum = Rotate(pairs[0].first, pairs[0].second);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    sum = ad::Add(sum, Rotate(pairs[i].first, pairs[i].second));
  }
  return sum;
}

Var FuseRelation(const Var& relation, const Var& qualifiers, double tau,
                 const Var& w2) {
  if (tau == 1.0) return relation;
  return ad::Add(ad::Scale(relation, tau),
                 ad::Scale(ad::MatMul(w2, qualifiers), 1.0 - tau));
}

Var FactRepresentation(const Var& relation, const Var& tail,
                       const Var& qualifiers,
                       const BackgroundEncoderParams& params, double tau) {
  Var fused = FuseRelation(relation, qualifiers, tau, params.w2);
  return ad::Add(ad::MatMul(params.w1, ad::ConcatRows({fused, tail})),
                 params.b1);
}

AttentionResult Attend(std::span<const Var> fact_reprs,
                       const BackgroundEncoderParams& params,
                       double leaky_slope) {
  // Stack the representations as rows: L x dim.
  std::vector<Var> rows;
  rows.reserve(fact_reprs.size());
  for (const Var& b : fact_reprs) rows.push_back(ad::Transpose(b));
  Var stacked = ad::ConcatRows(rows);
  Var scores = ad::LeakyRelu(ad::MatMul(stacked, params.u1), leaky_slope);
  Var weights = ad::Transpose(ad::RowSoftmax(ad::Transpose(scores)));
  Var pooled = ad::MatMul(ad::Transpose(stacked), weights);
  return {weights, pooled};
}

Var Gate(const Var& pooled, const BackgroundEncoderParams& params) {
  return ad::Sigmoid(
      ad::Add(ad::MatMul(ad::Transpose(params.u2), pooled), params.b_g));
}

Var Activate(const Var& x, Activation activation, double leaky_slope) {
  switch (activation) {
    case Activation::kTanh:
      return ad::Tanh(x);
    case Activation::kIdentity:
      return x;
    case Activation::kLeakyRelu:
      return ad::LeakyRelu(x, leaky_slope);
  }
  return x;
}

Var Enhance(const Var& entity, std::span<const Var> fact_reprs,
            const BackgroundEncoderParams& params, const ModelConfig& config) {
  if (fact_reprs.empty()) {
    return Activate(entity, config.entity_activation, config.leaky_slope);
  }
  AttentionResult attention = Attend(fact_reprs, params, config.leaky_slope);
  Var g = Gate(attention.pooled, params);
  const Eigen::Index dim = entity.rows();
  Var g_col = ad::Expand(g, dim, 1);
  Var mixed = ad::Add(ad::Mul(g_col, attention.pooled),
                      ad::Sub(entity, ad::Mul(g_col, entity)));
  return Activate(mixed, config.entity_activation, config.leaky_slope);
}

Var FactQualifiers(const HyperFact& fact, const Parameters& params) {
  std::vector<QualifierVars> pairs;
  pairs.reserve(fact.qualifiers.size());
  for (const Qualifier& q : fact.qualifiers) {
    pairs.emplace_back(params.relation(q.attribute), params.entity(q.value));
  }
  return QualifierSum(pairs, params.entities.dim());
}

Var EncodeBackgroundFact(const HyperFact& fact, const Parameters& params,
                         const ModelConfig& config) {
  return FactRepresentation(params.relation(fact.relation),
                            params.entity(fact.tail),
                            FactQualifiers(fact, params), params.background,
                            config.tau);
}

}  // namespace metarh::model
