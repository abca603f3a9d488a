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

#ifndef METARH_TESTS_SUPPORT_TEST_SUPPORT_H_
#define METARH_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "metarh/autodiff/var.h"
#include "metarh/common/error.h"
#include "metarh/common/rng.h"
#include "metarh/dataset/builder.h"
#include "metarh/dataset/synthetic.h"
#include "metarh/hkg/knowledge_store.h"

namespace metarh::testing {

ad::Matrix RandomMatrix(Eigen::Index rows, Eigen::Index cols, Rng& rng,
                        double scale = 1.0);

// Central differences of `f` with respect to every entry of `at`.
ad::Matrix FiniteDifference(const std::function<double(const ad::Matrix&)>& f,
                            const ad::Matrix& at, double step = 1e-6);

// max |a - b| / max(floor, |a| + |b|) over entries.
double RelativeError(const ad::Matrix& a, const ad::Matrix& b,
                     double floor = 1e-8);

// Lattice corpus pushed through the dataset builder, kept in memory.
KnowledgeStore SyntheticStore(const dataset::SyntheticConfig& config = {},
                              const dataset::BuildConfig& build = {});

// Class of the metarh::Error thrown by `f`; nullopt when nothing is thrown.
std::optional<ErrorClass> ThrownClass(const std::function<void()>& f);

}  // namespace metarh::testing

#endif  // METARH_TESTS_SUPPORT_TEST_SUPPORT_H_
