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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "metarh/autodiff/var.h"
#include "metarh/model/parameters.h"
#include "metarh/model/relation_encoder.h"
#include "test_support.h"

namespace metarh::model {
namespace {

using ad::Matrix;
using ad::Var;
using testing::FiniteDifference;
using testing::RandomMatrix;
using testing::RelativeError;

Var C(const Matrix& m) { return ad::Constant(m); }

GranParams RandomGran(int dim, int layers, bool zero_biases, Rng& rng) {
  GranParams params;
  for (int l = 0; l < layers; ++l) {
    GranBlockParams b;
    b.wq = ad::Parameter(RandomMatrix(dim, dim, rng, 0.5));
    b.wk = ad::Parameter(RandomMatrix(dim, dim, rng, 0.5));
    b.wv = ad::Parameter(RandomMatrix(dim, dim, rng, 0.5));
    b.wo = ad::Parameter(RandomMatrix(dim, dim, rng, 0.5));
    const double bias = zero_biases ? 0.0 : 0.5;
    b.key_bias = ad::Parameter(RandomMatrix(kNumEdgeLabels, dim, rng, bias));
    b.value_bias = ad::Parameter(RandomMatrix(kNumEdgeLabels, dim, rng, bias));
    b.ln1_gamma = ad::Parameter(Matrix::Ones(1, dim) + RandomMatrix(1, dim, rng, bias));
    b.ln1_beta = ad::Parameter(RandomMatrix(1, dim, rng, bias));
    b.ln2_gamma = ad::Parameter(Matrix::Ones(1, dim) + RandomMatrix(1, dim, rng, bias));
    b.ln2_beta = ad::Parameter(RandomMatrix(1, dim, rng, bias));
    b.ffn_w1 = ad::Parameter(RandomMatrix(dim, 4 * dim, rng, 0.5));
    b.ffn_b1 = ad::Parameter(RandomMatrix(1, 4 * dim, rng, bias));
    b.ffn_w2 = ad::Parameter(RandomMatrix(4 * dim, dim, rng, 0.5));
    b.ffn_b2 = ad::Parameter(RandomMatrix(1, dim, rng, bias));
    params.blocks.push_back(b);
  }
  return params;
}

// Row-wise layer norm, GELU (tanh form) and edge-biased attention written out
// with plain loops.
Matrix LayerNormOracle(const Matrix& x, const Matrix& gamma, const Matrix& beta) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mean = x.row(i).mean();
    double var = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) var += (x(i, j) - mean) * (x(i, j) - mean);
    var /= static_cast<double>(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out(i, j) = (x(i, j) - mean) / std::sqrt(var + 1e-5) * gamma(0, j) + beta(0, j);
    }
  }
  return out;
}

double GeluOracle(double x) {
  return 0.5 * x *
         (1.0 + std::tanh(std::sqrt(2.0 / std::numbers::pi) * (x + 0.044715 * x * x * x)));
}

Matrix GranOracle(const std::vector<Matrix>& nodes, const ad::IndexMatrix& labels,
                  const GranParams& params, int heads, bool hard_mask) {
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
  const Eigen::Index d = nodes[0].rows();
  const Eigen::Index dh = d / heads;
  Matrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = nodes[i].transpose();
  for (const GranBlockParams& b : params.blocks) {
    const Matrix h = LayerNormOracle(x, b.ln1_gamma.value(), b.ln1_beta.value());
    const Matrix q = h * b.wq.value(), k = h * b.wk.value(), v = h * b.wv.value();
    const Matrix& kb = b.key_bias.value();
    const Matrix& vb = b.value_bias.value();
    Matrix context = Matrix::Zero(n, d);
    for (int head = 0; head < heads; ++head) {
      const Eigen::Index c0 = head * dh;
      for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<double> logits(n);
        for (Eigen::Index j = 0; j < n; ++j) {
          double dot = 0.0;
          for (Eigen::Index c = c0; c < c0 + dh; ++c) {
            dot += q(i, c) * (k(j, c) + kb(labels(i, j), c));
          }
          logits[j] = dot / std::sqrt(static_cast<double>(dh));
          if (hard_mask && labels(i, j) == kUnconnected) logits[j] = -1e9;
        }
        const double top = *std::max_element(logits.begin(), logits.end());
        double z = 0.0;
        for (double& l : logits) z += (l = std::exp(l - top));
        for (Eigen::Index j = 0; j < n; ++j) {
          for (Eigen::Index c = c0; c < c0 + dh; ++c) {
            context(i, c) += logits[j] / z * (v(j, c) + vb(labels(i, j), c));
          }
        }
      }
    }
    x += context * b.wo.value();
    const Matrix h2 = LayerNormOracle(x, b.ln2_gamma.value(), b.ln2_beta.value());
    Matrix hidden = h2 * b.ffn_w1.value();
    for (Eigen::Index i = 0; i < hidden.rows(); ++i) {
      for (Eigen::Index j = 0; j < hidden.cols(); ++j) {
        hidden(i, j) = GeluOracle(hidden(i, j) + b.ffn_b1.value()(0, j));
      }
    }
    Matrix ffn = hidden * b.ffn_w2.value();
    for (Eigen::Index i = 0; i < n; ++i) ffn.row(i) += b.ffn_b2.value();
    x += ffn;
  }
  return x.row(kMaskNode).transpose();
}

std::vector<Matrix> RandomNodes(int count, int dim, Rng& rng) {
  std::vector<Matrix> out;
  for (int i = 0; i < count; ++i) out.push_back(RandomMatrix(dim, 1, rng));
  return out;
}

InstanceGraph Graph(const std::vector<Matrix>& nodes) {
  std::vector<QualifierVars> qualifiers;
  for (std::size_t i = 3; i + 1 < nodes.size(); i += 2) {
    qualifiers.emplace_back(C(nodes[i]), C(nodes[i + 1]));
  }
  return BuildInstanceGraph(C(nodes[0]), C(nodes[1]), C(nodes[2]), qualifiers);
}

TEST(EdgeLabelTest, MinimalGraph) {
  const ad::IndexMatrix l = EdgeLabels(0);
  ASSERT_EQ(l.rows(), 3);
  EXPECT_EQ(l(0, 1), kTripleSubject);
  EXPECT_EQ(l(1, 2), kTripleObject);
  EXPECT_EQ(l(0, 2), kUnconnected);
  EXPECT_EQ(l, l.transpose());
  for (int i = 0; i < 3; ++i) EXPECT_EQ(l(i, i), kSelf);
}

TEST(EdgeLabelTest, TwoQualifierLayout) {
  const ad::IndexMatrix l = EdgeLabels(2);
  ASSERT_EQ(l.rows(), 7);
  EXPECT_EQ(l, l.transpose());
  for (int a : {3, 5}) {
    EXPECT_EQ(l(a, kMaskNode), kQualAttributeOfTriple);
    EXPECT_EQ(l(a + 1, kMaskNode), kQualValueOfAttribute);
    EXPECT_EQ(l(a, a + 1), kIntraQualifier);
    EXPECT_EQ(l(a, 0), kUnconnected);
    EXPECT_EQ(l(a, 2), kUnconnected);
  }
  EXPECT_EQ(l(3, 5), kCoQualifier);
  EXPECT_EQ(l(4, 6), kUnconnected);
  EXPECT_EQ(l(3, 6), kUnconnected);
}

TEST(EdgeLabelTest, NodeCount) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = static_cast<int>(rng.UniformIndex(11));
    EXPECT_EQ(Graph(RandomNodes(3 + 2 * m, 4, rng)).num_nodes(), std::size_t(3 + 2 * m));
    EXPECT_EQ(EdgeLabels(m).rows(), 3 + 2 * m);
  }
}

TEST(GranForwardTest, BiasFreeSingleBlockIsPlainSelfAttention) {
  Rng rng(2);
  const GranParams params = RandomGran(6, 1, true, rng);
  const std::vector<Matrix> nodes = RandomNodes(3, 6, rng);
  const Matrix out = GranForward(Graph(nodes), params, GranOptions{.heads = 1}).value();
  // With zero biases every label contributes nothing, so the oracle ignores
  // the label matrix; MASK attends to all three nodes.
  const ad::IndexMatrix selfs = ad::IndexMatrix::Constant(3, 3, kSelf);
  EXPECT_LT((out - GranOracle(nodes, selfs, params, 1, false)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GranForwardTest, EdgeBiasedMultiHeadMatchesOracle) {
  Rng rng(3);
  for (int m : {0, 1, 3}) {
    const GranParams params = RandomGran(8, 2, false, rng);
    const std::vector<Matrix> nodes = RandomNodes(3 + 2 * m, 8, rng);
    for (bool hard_mask : {true, false}) {
      const Matrix out =
          GranForward(Graph(nodes), params,
                      GranOptions{.heads = 2, .hard_mask = hard_mask})
              .value();
      ASSERT_EQ(out.rows(), 8);
      ASSERT_EQ(out.cols(), 1);
      EXPECT_LT((out - GranOracle(nodes, EdgeLabels(m), params, 2, hard_mask))
                    .cwiseAbs().maxCoeff(), 1e-10)
          << "m=" << m << " hard_mask=" << hard_mask;
    }
  }
}

TEST(GranForwardTest, QualifierPermutationInvariance) {
  Rng rng(4);
  const GranParams params = RandomGran(8, 2, false, rng);
  const std::vector<Matrix> nodes = RandomNodes(3 + 2 * 4, 8, rng);
  const Matrix base = GranForward(Graph(nodes), params, GranOptions{}).value();
  std::vector<int> order{0, 1, 2, 3};
  while (std::next_permutation(order.begin(), order.end())) {
    std::vector<Matrix> permuted(nodes.begin(), nodes.begin() + 3);
    for (int i : order) {
      permuted.push_back(nodes[3 + 2 * i]);
      permuted.push_back(nodes[4 + 2 * i]);
    }
    const Matrix out = GranForward(Graph(permuted), params, GranOptions{}).value();
    EXPECT_LT((out - base).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(GranForwardTest, GradientsMatchFiniteDifferences) {
  Rng rng(5);
  const GranParams params = RandomGran(8, 1, false, rng);
  const std::vector<Matrix> nodes = RandomNodes(3 + 2 * 2, 8, rng);
  const Matrix w = RandomMatrix(8, 1, rng);
  const GranOptions options{.heads = 1};
  auto loss = [&](const Var& out) { return ad::SumAll(ad::Mul(out, C(w))); };

  // Gradient with respect to the head node.
  Var head = ad::Parameter(nodes[0]);
  std::vector<QualifierVars> quals{{C(nodes[3]), C(nodes[4])}, {C(nodes[5]), C(nodes[6])}};
  Var out = GranForward(BuildInstanceGraph(head, C(nodes[1]), C(nodes[2]), quals),
                        params, options);
  const Matrix g_head = ad::Grad(loss(out), std::span<const Var>(&head, 1), false)[0].value();
  const Matrix fd_head = FiniteDifference(
      [&](const Matrix& m) {
        std::vector<Matrix> moved = nodes;
        moved[0] = m;
        return loss(GranForward(Graph(moved), params, options)).item();
      },
      nodes[0]);
  EXPECT_LT(RelativeError(g_head, fd_head, 1e-6), 1e-3);

  // Gradient with respect to the key-bias table of the block.
  Var bias = params.blocks[0].key_bias;
  const Matrix g_bias =
      ad::Grad(loss(GranForward(Graph(nodes), params, options)),
               std::span<const Var>(&bias, 1), false)[0].value();
  const Matrix fd_bias = FiniteDifference(
      [&](const Matrix& m) {
        GranParams moved = params;
        moved.blocks[0].key_bias = C(m);
        return loss(GranForward(Graph(nodes), moved, options)).item();
      },
      bias.value());
  EXPECT_LT(RelativeError(g_bias, fd_bias, 1e-6), 1e-3);
}

TEST(AverageSupportTest, Examples) {
  Rng rng(6);
  const Matrix v = RandomMatrix(5, 1, rng);
  const std::vector<Var> same(5, C(v));
  EXPECT_LT((AverageSupport(same).value() - v).norm(), 1e-15);
  const std::vector<Var> cancel{C(v), C(-v)};
  EXPECT_EQ(AverageSupport(cancel).value(), Matrix::Zero(5, 1));

  std::vector<Var> reprs;
  Matrix mean = Matrix::Zero(5, 1);
  for (int i = 0; i < 5; ++i) {
    const Matrix r = RandomMatrix(5, 1, rng);
    reprs.push_back(C(r));
    mean += r / 5.0;
  }
  EXPECT_LT((AverageSupport(reprs).value() - mean).cwiseAbs().maxCoeff(), 1e-7);
  std::vector<int> order{0, 1, 2, 3, 4};
  while (std::next_permutation(order.begin(), order.end())) {
    std::vector<Var> permuted;
    for (int i : order) permuted.push_back(reprs[i]);
    EXPECT_LT((AverageSupport(permuted).value() - mean).cwiseAbs().maxCoeff(), 1e-6);
  }
  EXPECT_EQ(testing::ThrownClass([] { AverageSupport({}); }), ErrorClass::kEpisode);
}

}  // namespace
}  // namespace metarh::model
