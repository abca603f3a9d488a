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

#include "metarh/model/relation_encoder.h"

#include <cmath>

#include "metarh/common/error.h"

namespace metarh::model {

using ad::Var;

namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kMaskedLogit = -1e9;

Var AddRowBias(const Var& x, const Var& bias) {
  return ad::Add(x, ad::ExpandRows(bias, x.rows()));
}

Var Dropout(const Var& x, const GranOptions& options) {
  if (options.dropout_rng == nullptr || options.dropout <= 0.0) return x;
  const double keep = 1.0 - options.dropout;
  ad::Matrix mask(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      mask(i, j) = options.dropout_rng->UniformReal() < keep ? 1.0 / keep : 0.0;
    }
  }
  return ad::Mul(x, ad::Constant(std::move(mask)));
}

Var AttentionBlock(const Var& x, const GranBlockParams& p,
                   const std::shared_ptr<const ad::IndexMatrix>& labels,
                   const Var& logit_mask, const GranOptions& options) {
  const Eigen::Index n = x.rows(), dim = x.cols();
  const Eigen::Index head_dim = dim / options.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  Var q = ad::MatMul(x, p.wq);
  Var k = ad::MatMul(x, p.wk);
  Var v = ad::MatMul(x, p.wv);
  Var out;
  for (int h = 0; h < options.heads; ++h) {
    const Eigen::Index c0 = h * head_dim;
    Var qh = ad::Slice(q, 0, c0, n, head_dim);
    Var kh = ad::Slice(k, 0, c0, n, head_dim);
    Var vh = ad::Slice(v, 0, c0, n, head_dim);
    Var key_bias = ad::Slice(p.key_bias, 0, c0, kNumEdgeLabels, head_dim);
    Var value_bias = ad::Slice(p.value_bias, 0, c0, kNumEdgeLabels, head_dim);

    Var logits = ad::Add(
        ad::MatMul(qh, ad::Transpose(kh)),
        ad::GatherColumns(ad::MatMul(qh, ad::Transpose(key_bias)), labels));
    logits = ad::Scale(logits, scale);
    if (logit_mask.defined()) logits = ad::Add(logits, logit_mask);
    Var weights = Dropout(ad::RowSoftmax(logits), options);

    Var context = ad::Add(
        ad::MatMul(weights, vh),
        ad::MatMul(ad::ScatterColumns(weights, labels, kNumEdgeLabels),
                   value_bias));
    // concat(heads) * Wo == sum_h head_h * Wo[rows of head h]
    Var projected =
        ad::MatMul(context, ad::Slice(p.wo, c0, 0, head_dim, dim));
    out = out.defined() ? ad::Add(out, projected) : projected;
  }
  return out;
}

}  // namespace

ad::IndexMatrix EdgeLabels(int num_qualifiers) {
  const int n = 3 + 2 * num_qualifiers;
  ad::IndexMatrix labels = ad::IndexMatrix::Constant(n, n, kUnconnected);
  auto link = [&](int a, int b, int label) {
    labels(a, b) = label;
    labels(b, a) = label;
  };
  for (int i = 0; i < n; ++i) labels(i, i) = kSelf;
  link(0, kMaskNode, kTripleSubject);
  link(kMaskNode, 2, kTripleObject);
  for (int i = 0; i < num_qualifiers; ++i) {
    const int a = 3 + 2 * i;
    const int v = a + 1;
    link(a, kMaskNode, kQualAttributeOfTriple);
    link(v, kMaskNode, kQualValueOfAttribute);
    link(a, v, kIntraQualifier);
    for (int j = i + 1; j < num_qualifiers; ++j) {
      link(a, 3 + 2 * j, kCoQualifier);
    }
  }
  return labels;
}

InstanceGraph BuildInstanceGraph(const Var& head, const Var& mask,
                                 const Var& tail,
                                 std::span<const QualifierVars> qualifiers) {
  InstanceGraph graph;
  graph.nodes = {head, mask, tail};
  for (const auto& [attribute, value] : qualifiers) {
    graph.nodes.push_back(attribute);
    graph.nodes.push_back(value);
  }
  graph.labels = std::make_shared<const ad::IndexMatrix>(
      EdgeLabels(static_cast<int>(qualifiers.size())));
  return graph;
}

Var GranForward(const InstanceGraph& graph, const GranParams& params,
                const GranOptions& options) {
  if (params.blocks.empty()) {
    throw Error(ErrorClass::kConfig, "relation encoder needs at least one block");
  }
  std::vector<Var> rows;
  rows.reserve(graph.nodes.size());
  for (const Var& node : graph.nodes) rows.push_back(ad::Transpose(node));
  Var x = ad::ConcatRows(rows);  // n x dim
  if (x.cols() % options.heads != 0) {
    throw Error(ErrorClass::kConfig, "heads must divide the embedding dim");
  }

  Var logit_mask;
  if (options.hard_mask) {
    const ad::IndexMatrix& labels = *graph.labels;
    ad::Matrix mask = ad::Matrix::Zero(labels.rows(), labels.cols());
    for (Eigen::Index j = 0; j < labels.cols(); ++j) {
      for (Eigen::Index i = 0; i < labels.rows(); ++i) {
        if (labels(i, j) == kUnconnected) mask(i, j) = kMaskedLogit;
      }
    }
    logit_mask = ad::Constant(std::move(mask));
  }

  for (const GranBlockParams& block : params.blocks) {
    Var normed = ad::LayerNormRows(x, block.ln1_gamma, block.ln1_beta,
                                   kLayerNormEps);
    x = ad::Add(x, Dropout(AttentionBlock(normed, block, graph.labels,
                                          logit_mask, options),
                           options));
    Var normed2 = ad::LayerNormRows(x, block.ln2_gamma, block.ln2_beta,
                                    kLayerNormEps);
    Var hidden = ad::Gelu(AddRowBias(ad::MatMul(normed2, block.ffn_w1),
                                     block.ffn_b1));
    Var ffn = AddRowBias(ad::MatMul(hidden, block.ffn_w2), block.ffn_b2);
    x = ad::Add(x, Dropout(ffn, options));
  }
  // Pre-norm residual stream, read out without a final norm so the relation
  // vector keeps a free magnitude.
  return ad::Transpose(ad::Slice(x, kMaskNode, 0, 1, x.cols()));
}

Var AverageSupport(std::span<const Var> mask_reprs) {
  if (mask_reprs.empty()) {
    throw Error(ErrorClass::kEpisode, "cannot average an empty support set");
  }
  Var sum = mask_reprs[0];
  for (std::size_t i = 1; i < mask_reprs.size(); ++i) {
    sum = ad::Add(sum, mask_reprs[i]);
  }
  return ad::Scale(sum, 1.0 / static_cast<double>(mask_reprs.size()));
}

}  // namespace metarh::model
