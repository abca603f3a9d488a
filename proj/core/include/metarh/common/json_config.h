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

#ifndef METARH_COMMON_JSON_CONFIG_H_
#define METARH_COMMON_JSON_CONFIG_H_

#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"

namespace metarh {

// Sets `config[key]` from command-line text, parsed according to the type the
// key already holds. Unknown keys and unparsable text raise config errors.
void ApplyOverride(nlohmann::ordered_json& config, const std::string& key,
                   const std::string& text);

// Raises a config error naming the first key of `json` that is not allowed.
void RejectUnknownKeys(const nlohmann::json& json,
                       const nlohmann::ordered_json& allowed,
                       std::string_view what);

}  // namespace metarh

#endif  // METARH_COMMON_JSON_CONFIG_H_
