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

#include "metarh/common/json_config.h"

#include <charconv>

#include "metarh/common/error.h"

namespace metarh {
namespace {

[[noreturn]] void Bad(const std::string& key, const std::string& text,
                      const char* expected) {
  throw Error(ErrorClass::kConfig, "option '" + key + "' expects " + expected +
                                       ", got '" + text + "'");
}

}  // namespace

void ApplyOverride(nlohmann::ordered_json& config, const std::string& key,
                   const std::string& text) {
  if (!config.contains(key)) {
    throw Error(ErrorClass::kConfig, "unknown option '" + key + "'");
  }
  nlohmann::ordered_json& slot = config[key];
  switch (slot.type()) {
    case nlohmann::json::value_t::boolean:
      if (text == "true" || text == "1") {
        slot = true;
      } else if (text == "false" || text == "0") {
        slot = false;
      } else {
        Bad(key, text, "true or false");
      }
      return;
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned: {
      long long value = 0;
      auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || end != text.data() + text.size()) {
        Bad(key, text, "an integer");
      }
      if (slot.is_number_unsigned()) {
        if (value < 0) Bad(key, text, "a non-negative integer");
        slot = static_cast<unsigned long long>(value);
      } else {
        slot = value;
      }
      return;
    }
    case nlohmann::json::value_t::number_float: {
      try {
        std::size_t used = 0;
        double value = std::stod(text, &used);
        if (used != text.size()) Bad(key, text, "a number");
        slot = value;
      } catch (const std::logic_error&) {
        Bad(key, text, "a number");
      }
      return;
    }
    case nlohmann::json::value_t::string:
      slot = text;
      return;
    default: {
      nlohmann::ordered_json parsed =
          nlohmann::ordered_json::parse(text, nullptr, /*allow_exceptions=*/false);
      if (parsed.is_discarded() || parsed.type() != slot.type()) {
        Bad(key, text, "a JSON value of the same shape");
      }
      slot = std::move(parsed);
      return;
    }
  }
}

void RejectUnknownKeys(const nlohmann::json& json,
                       const nlohmann::ordered_json& allowed,
                       std::string_view what) {
  if (!json.is_object()) {
    throw Error(ErrorClass::kConfig, std::string(what) + " must be a JSON object");
  }
  for (const auto& item : json.items()) {
    if (!allowed.contains(item.key())) {
      throw Error(ErrorClass::kConfig, "unknown " + std::string(what) +
                                           " key '" + item.key() + "'");
    }
  }
}

}  // namespace metarh
