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

#include <unordered_set>

#include "metarh/autodiff/var.h"

namespace metarh::ad {
namespace {

// Post-order over nodes that require grad: every node appears after all of
// its parents.
std::vector<Node*> TopologicalOrder(Node* root) {
  std::vector<Node*> order;
  if (root == nullptr || !root->requires_grad) return order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(root, 0);
  visited.insert(root);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].node();
      if (parent != nullptr && parent->requires_grad &&
          visited.insert(parent).second) {
        stack.emplace_back(parent, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  return order;
}

void Accumulate(std::unordered_map<Node*, Var>& grads, Node* node,
                const Var& g) {
  auto it = grads.find(node);
  if (it == grads.end()) {
    grads.emplace(node, g);
  } else {
    it->second = Add(it->second, g);
  }
}

}  // namespace

std::vector<Var> Grad(const Var& output, std::span<const Var> inputs,
                      bool create_graph) {
  std::vector<Node*> order = TopologicalOrder(output.node());

  std::unordered_set<Node*> targets;
  for (const Var& in : inputs) targets.insert(in.node());

  // A node is relevant when some input is reachable through its parents.
  std::unordered_set<Node*> relevant;
  for (Node* node : order) {
    if (targets.contains(node)) {
      relevant.insert(node);
      continue;
    }
    for (const Var& p : node->parents) {
      if (relevant.contains(p.node())) {
        relevant.insert(node);
        break;
      }
    }
  }

  GradModeGuard mode(create_graph);
  std::unordered_map<Node*, Var> grads;
  if (!order.empty()) {
    grads.emplace(output.node(), Constant(Matrix::Ones(1, 1)));
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (!relevant.contains(node) || !node->backward) continue;
    auto found = grads.find(node);
    if (found == grads.end()) continue;
    std::vector<Var> parent_grads = node->backward(found->second);
    for (std::size_t i = 0; i < node->parents.size(); ++i) {
      Node* parent = node->parents[i].node();
      if (!parent_grads[i].defined() || !relevant.contains(parent)) continue;
      Accumulate(grads, parent, parent_grads[i]);
    }
    if (!targets.contains(node)) grads.erase(found);
  }

  std::vector<Var> result;
  result.reserve(inputs.size());
  for (const Var& in : inputs) {
    auto found = grads.find(in.node());
    result.push_back(found != grads.end() ? found->second
                                          : Zeros(in.rows(), in.cols()));
  }
  return result;
}

void BackwardInto(const Var& output, GradientMap& leaf_grads) {
  std::vector<Node*> order = TopologicalOrder(output.node());
  if (order.empty()) return;
  NoGradGuard no_grad;
  std::unordered_map<Node*, Var> grads;
  grads.emplace(output.node(), Constant(Matrix::Ones(1, 1)));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    auto found = grads.find(node);
    if (found == grads.end()) continue;
    if (node->is_leaf) {
      auto [slot, inserted] =
          leaf_grads.try_emplace(node, found->second.value());
      if (!inserted) slot->second += found->second.value();
    } else if (node->backward) {
      std::vector<Var> parent_grads = node->backward(found->second);
      for (std::size_t i = 0; i < node->parents.size(); ++i) {
        Node* parent = node->parents[i].node();
        if (!parent_grads[i].defined() || !parent->requires_grad) continue;
        Accumulate(grads, parent, parent_grads[i]);
      }
    }
    grads.erase(found);
  }
}

}  // namespace metarh::ad
