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

#ifndef METARH_AUTODIFF_VAR_H_
#define METARH_AUTODIFF_VAR_H_

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace metarh::ad {

using Matrix = Eigen::MatrixXd;
using IndexMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

class Var;
struct Node;

// Maps an upstream gradient onto one gradient per parent (aligned with
// Node::parents; an empty Var means "no contribution"). Implementations are
// written with differentiable ops, which is what makes gradients of gradients
// available.
using BackwardFn = std::function<std::vector<Var>(const Var& grad_output)>;

struct Node {
  Matrix value;
  std::vector<Var> parents;
  BackwardFn backward;
  bool requires_grad = false;
  bool is_leaf = false;
};

// Handle to a node in the computation graph. Copies share the node.
class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  bool defined() const { return node_ != nullptr; }
  const Matrix& value() const { return node_->value; }
  Eigen::Index rows() const { return node_->value.rows(); }
  Eigen::Index cols() const { return node_->value.cols(); }
  Eigen::Index size() const { return node_->value.size(); }
  bool requires_grad() const { return node_ && node_->requires_grad; }
  bool is_leaf() const { return node_ && node_->is_leaf; }
  Node* node() const { return node_.get(); }

  // Scalar read-out for 1x1 values.
  double item() const { return node_->value(0, 0); }

  // Overwrites a leaf in place (optimizer updates, checkpoint restore).
  Matrix& mutable_leaf_value() { return node_->value; }

 private:
  std::shared_ptr<Node> node_;
};

// Gradient recording is on by default; a guard turns it off for the current
// thread, which is how evaluation and first-order steps avoid graph growth.
bool GradEnabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

class GradModeGuard {
 public:
  explicit GradModeGuard(bool enabled);
  ~GradModeGuard();
  GradModeGuard(const GradModeGuard&) = delete;
  GradModeGuard& operator=(const GradModeGuard&) = delete;

 private:
  bool previous_;
};

// Leaves.
Var Constant(Matrix value);
Var Parameter(Matrix value);
Var Scalar(double value);
Var Zeros(Eigen::Index rows, Eigen::Index cols);

// Cuts the graph: same value, no history.
Var Detach(const Var& x);

// Builds an interior node; exposed for composite ops defined elsewhere.
Var MakeNode(Matrix value, std::vector<Var> parents, BackwardFn backward);

// Elementwise arithmetic; shapes must match.
Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var Div(const Var& a, const Var& b);
Var Neg(const Var& a);
Var Scale(const Var& a, double factor);
Var AddScalar(const Var& a, double offset);

Var MatMul(const Var& a, const Var& b);
Var Transpose(const Var& a);

// Reductions and their broadcasting adjoints.
Var SumAll(const Var& a);                                      // -> 1x1
Var Expand(const Var& a, Eigen::Index rows, Eigen::Index cols);  // 1x1 -> rxc
Var RowSum(const Var& a);                                      // rxc -> rx1
Var ExpandCols(const Var& a, Eigen::Index cols);               // rx1 -> rxc
Var ColSum(const Var& a);                                      // rxc -> 1xc
Var ExpandRows(const Var& a, Eigen::Index rows);               // 1xc -> rxc

// Elementwise nonlinearities.
Var Tanh(const Var& a);
Var Sigmoid(const Var& a);
Var Exp(const Var& a);
Var Sqrt(const Var& a);
Var Sin(const Var& a);
Var Cos(const Var& a);
Var Relu(const Var& a);
Var LeakyRelu(const Var& a, double negative_slope);
Var ClampMin(const Var& a, double floor);

// Block access.
Var Slice(const Var& a, Eigen::Index row, Eigen::Index col, Eigen::Index rows,
          Eigen::Index cols);
Var Pad(const Var& a, Eigen::Index rows, Eigen::Index cols, Eigen::Index row,
        Eigen::Index col);
Var ConcatRows(std::span<const Var> parts);
Var ConcatRows(std::initializer_list<Var> parts);

// out(i, j) = a(i, index(i, j)); a is n x k, index is n x n with values < k.
Var GatherColumns(const Var& a, std::shared_ptr<const IndexMatrix> index);
// out(i, index(i, j)) += a(i, j); a is n x n, result n x k.
Var ScatterColumns(const Var& a, std::shared_ptr<const IndexMatrix> index,
                   Eigen::Index k);

// Composites.
Var SquaredNorm(const Var& a);
Var Norm(const Var& a);  // L2 over all entries; gradient 0 at the origin
Var RowSoftmax(const Var& a);
Var LayerNormRows(const Var& x, const Var& gamma, const Var& beta, double eps);
Var Gelu(const Var& a);

inline Var operator+(const Var& a, const Var& b) { return Add(a, b); }
inline Var operator-(const Var& a, const Var& b) { return Sub(a, b); }
inline Var operator-(const Var& a) { return Neg(a); }
inline Var operator*(double s, const Var& a) { return Scale(a, s); }
inline Var operator*(const Var& a, double s) { return Scale(a, s); }

// Gradients of a 1x1 `output` with respect to each of `inputs` (which may be
// interior nodes). Unreached inputs get a zero gradient of matching shape.
// With create_graph the returned gradients are themselves differentiable.
std::vector<Var> Grad(const Var& output, std::span<const Var> inputs,
                      bool create_graph);

// Leaf gradients keyed by node.
using GradientMap = std::unordered_map<const Node*, Matrix>;

// Accumulates d(output)/d(leaf) for every reachable leaf into `grads`.
void BackwardInto(const Var& output, GradientMap& grads);

}  // namespace metarh::ad

#endif  // METARH_AUTODIFF_VAR_H_
