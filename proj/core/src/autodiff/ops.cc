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

#include <cassert>
#include <cmath>
#include <numbers>

#include "metarh/autodiff/var.h"

namespace metarh::ad {
namespace {

Var MaskedGrad(const Var& g, Matrix mask) { return Mul(g, Constant(std::move(mask))); }

}  // namespace

Var Add(const Var& a, const Var& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  return MakeNode(a.value() + b.value(), {a, b},
                  [](const Var& g) { return std::vector<Var>{g, g}; });
}

Var Sub(const Var& a, const Var& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  return MakeNode(a.value() - b.value(), {a, b},
                  [](const Var& g) { return std::vector<Var>{g, Neg(g)}; });
}

Var Mul(const Var& a, const Var& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  return MakeNode(a.value().cwiseProduct(b.value()), {a, b},
                  [a, b](const Var& g) {
                    return std::vector<Var>{
                        a.requires_grad() ? Mul(g, b) : Var(),
                        b.requires_grad() ? Mul(g, a) : Var()};
                  });
}

Var Div(const Var& a, const Var& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  return MakeNode(a.value().cwiseQuotient(b.value()), {a, b},
                  [a, b](const Var& g) {
                    Var ga = a.requires_grad() ? Div(g, b) : Var();
                    Var gb = b.requires_grad()
                                 ? Neg(Div(Mul(g, a), Mul(b, b)))
                                 : Var();
                    return std::vector<Var>{ga, gb};
                  });
}

Var Neg(const Var& a) {
  return MakeNode(-a.value(), {a},
                  [](const Var& g) { return std::vector<Var>{Neg(g)}; });
}

Var Scale(const Var& a, double factor) {
  return MakeNode(a.value() * factor, {a}, [factor](const Var& g) {
    return std::vector<Var>{Scale(g, factor)};
  });
}

Var AddScalar(const Var& a, double offset) {
  return MakeNode(a.value().array() + offset, {a},
                  [](const Var& g) { return std::vector<Var>{g}; });
}

Var MatMul(const Var& a, const Var& b) {
  assert(a.cols() == b.rows());
  return MakeNode(a.value() * b.value(), {a, b}, [a, b](const Var& g) {
    return std::vector<Var>{
        a.requires_grad() ? MatMul(g, Transpose(b)) : Var(),
        b.requires_grad() ? MatMul(Transpose(a), g) : Var()};
  });
}

Var Transpose(const Var& a) {
  return MakeNode(a.value().transpose(), {a}, [](const Var& g) {
    return std::vector<Var>{Transpose(g)};
  });
}

Var SumAll(const Var& a) {
  const Eigen::Index r = a.rows(), c = a.cols();
  return MakeNode(Matrix::Constant(1, 1, a.value().sum()), {a},
                  [r, c](const Var& g) {
                    return std::vector<Var>{Expand(g, r, c)};
                  });
}

Var Expand(const Var& a, Eigen::Index rows, Eigen::Index cols) {
  assert(a.rows() == 1 && a.cols() == 1);
  return MakeNode(Matrix::Constant(rows, cols, a.item()), {a},
                  [](const Var& g) { return std::vector<Var>{SumAll(g)}; });
}

Var RowSum(const Var& a) {
  const Eigen::Index c = a.cols();
  return MakeNode(a.value().rowwise().sum(), {a}, [c](const Var& g) {
    return std::vector<Var>{ExpandCols(g, c)};
  });
}

Var ExpandCols(const Var& a, Eigen::Index cols) {
  assert(a.cols() == 1);
  return MakeNode(a.value().replicate(1, cols), {a},
                  [](const Var& g) { return std::vector<Var>{RowSum(g)}; });
}

Var ColSum(const Var& a) {
  const Eigen::Index r = a.rows();
  return MakeNode(a.value().colwise().sum(), {a}, [r](const Var& g) {
    return std::vector<Var>{ExpandRows(g, r)};
  });
}

Var ExpandRows(const Var& a, Eigen::Index rows) {
  assert(a.rows() == 1);
  return MakeNode(a.value().replicate(rows, 1), {a},
                  [](const Var& g) { return std::vector<Var>{ColSum(g)}; });
}

Var Tanh(const Var& a) {
  return MakeNode(a.value().array().tanh(), {a}, [a](const Var& g) {
    Var t = Tanh(a);
    return std::vector<Var>{Sub(g, Mul(g, Mul(t, t)))};
  });
}

Var Sigmoid(const Var& a) {
  Matrix value = (1.0 + (-a.value().array()).exp()).inverse();
  return MakeNode(std::move(value), {a}, [a](const Var& g) {
    Var s = Sigmoid(a);
    return std::vector<Var>{Mul(g, Sub(s, Mul(s, s)))};
  });
}

Var Exp(const Var& a) {
  return MakeNode(a.value().array().exp(), {a}, [a](const Var& g) {
    return std::vector<Var>{Mul(g, Exp(a))};
  });
}

Var Sqrt(const Var& a) {
  return MakeNode(a.value().array().sqrt(), {a}, [a](const Var& g) {
    // Clamped so that composite norms have a zero (not NaN) slope at 0.
    return std::vector<Var>{Div(g, Scale(ClampMin(Sqrt(a), 1e-12), 2.0))};
  });
}

Var Sin(const Var& a) {
  return MakeNode(a.value().array().sin(), {a}, [a](const Var& g) {
    return std::vector<Var>{Mul(g, Cos(a))};
  });
}

Var Cos(const Var& a) {
  return MakeNode(a.value().array().cos(), {a}, [a](const Var& g) {
    return std::vector<Var>{Neg(Mul(g, Sin(a)))};
  });
}

Var Relu(const Var& a) {
  Matrix mask = (a.value().array() > 0.0).cast<double>();
  return MakeNode(a.value().cwiseMax(0.0), {a},
                  [mask = std::move(mask)](const Var& g) {
                    return std::vector<Var>{MaskedGrad(g, mask)};
                  });
}

Var LeakyRelu(const Var& a, double negative_slope) {
  Matrix mask =
      (a.value().array() > 0.0).select(Matrix::Ones(a.rows(), a.cols()),
                                       negative_slope);
  Matrix value = a.value().cwiseProduct(mask);
  return MakeNode(std::move(value), {a},
                  [mask = std::move(mask)](const Var& g) {
                    return std::vector<Var>{MaskedGrad(g, mask)};
                  });
}

Var ClampMin(const Var& a, double floor) {
  Matrix mask = (a.value().array() > floor).cast<double>();
  return MakeNode(a.value().cwiseMax(floor), {a},
                  [mask = std::move(mask)](const Var& g) {
                    return std::vector<Var>{MaskedGrad(g, mask)};
                  });
}

Var Slice(const Var& a, Eigen::Index row, Eigen::Index col, Eigen::Index rows,
          Eigen::Index cols) {
  assert(row + rows <= a.rows() && col + cols <= a.cols());
  const Eigen::Index full_rows = a.rows(), full_cols = a.cols();
  return MakeNode(a.value().block(row, col, rows, cols), {a},
                  [=](const Var& g) {
                    return std::vector<Var>{
                        Pad(g, full_rows, full_cols, row, col)};
                  });
}

Var Pad(const Var& a, Eigen::Index rows, Eigen::Index cols, Eigen::Index row,
        Eigen::Index col) {
  Matrix value = Matrix::Zero(rows, cols);
  value.block(row, col, a.rows(), a.cols()) = a.value();
  const Eigen::Index r = a.rows(), c = a.cols();
  return MakeNode(std::move(value), {a}, [=](const Var& g) {
    return std::vector<Var>{Slice(g, row, col, r, c)};
  });
}

Var ConcatRows(std::span<const Var> parts) {
  assert(!parts.empty());
  const Eigen::Index cols = parts.front().cols();
  Eigen::Index rows = 0;
  for (const Var& p : parts) {
    assert(p.cols() == cols);
    rows += p.rows();
  }
  Matrix value(rows, cols);
  std::vector<Eigen::Index> offsets;
  offsets.reserve(parts.size());
  Eigen::Index offset = 0;
  for (const Var& p : parts) {
    value.middleRows(offset, p.rows()) = p.value();
    offsets.push_back(offset);
    offset += p.rows();
  }
  std::vector<Var> parents(parts.begin(), parts.end());
  std::vector<Eigen::Index> heights;
  for (const Var& p : parts) heights.push_back(p.rows());
  return MakeNode(std::move(value), std::move(parents),
                  [offsets, heights, cols](const Var& g) {
                    std::vector<Var> out;
                    out.reserve(offsets.size());
                    for (std::size_t i = 0; i < offsets.size(); ++i) {
                      out.push_back(Slice(g, offsets[i], 0, heights[i], cols));
                    }
                    return out;
                  });
}

Var ConcatRows(std::initializer_list<Var> parts) {
  return ConcatRows(std::span<const Var>(parts.begin(), parts.size()));
}

Var GatherColumns(const Var& a, std::shared_ptr<const IndexMatrix> index) {
  const Eigen::Index n = index->rows(), m = index->cols(), k = a.cols();
  assert(a.rows() == n);
  Matrix value(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) value(i, j) = a.value()(i, (*index)(i, j));
  }
  return MakeNode(std::move(value), {a}, [index, k](const Var& g) {
    return std::vector<Var>{ScatterColumns(g, index, k)};
  });
}

Var ScatterColumns(const Var& a, std::shared_ptr<const IndexMatrix> index,
                   Eigen::Index k) {
  const Eigen::Index n = index->rows(), m = index->cols();
  assert(a.rows() == n && a.cols() == m);
  Matrix value = Matrix::Zero(n, k);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) value(i, (*index)(i, j)) += a.value()(i, j);
  }
  return MakeNode(std::move(value), {a}, [index](const Var& g) {
    return std::vector<Var>{GatherColumns(g, index)};
  });
}

Var SquaredNorm(const Var& a) { return SumAll(Mul(a, a)); }

Var Norm(const Var& a) { return Sqrt(SquaredNorm(a)); }

Var RowSoftmax(const Var& a) {
  // The row max shift is a constant: softmax is invariant to it.
  Matrix shift = a.value().rowwise().maxCoeff().replicate(1, a.cols());
  Var e = Exp(Sub(a, Constant(std::move(shift))));
  return Div(e, ExpandCols(RowSum(e), a.cols()));
}

Var LayerNormRows(const Var& x, const Var& gamma, const Var& beta, double eps) {
  const Eigen::Index n = x.rows(), c = x.cols();
  const double inv_c = 1.0 / static_cast<double>(c);
  Var centered = Sub(x, ExpandCols(Scale(RowSum(x), inv_c), c));
  Var variance = Scale(RowSum(Mul(centered, centered)), inv_c);
  Var normed = Div(centered, ExpandCols(Sqrt(AddScalar(variance, eps)), c));
  return Add(Mul(normed, ExpandRows(gamma, n)), ExpandRows(beta, n));
}

Var Gelu(const Var& a) {
  // tanh approximation
  const double k = std::sqrt(2.0 / std::numbers::pi);
  Var cubic = Mul(a, Mul(a, a));
  Var inner = Scale(Add(a, Scale(cubic, 0.044715)), k);
  return Mul(Scale(a, 0.5), AddScalar(Tanh(inner), 1.0));
}

}  // namespace metarh::ad
