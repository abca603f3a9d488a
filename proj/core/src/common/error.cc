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

#include "metarh/common/error.h"

namespace metarh {

std::string_view ErrorClassName(ErrorClass error_class) {
  switch (error_class) {
    case ErrorClass::kParse:
      return "parse_error";
    case ErrorClass::kSchema:
      return "schema_error";
    case ErrorClass::kConsistency:
      return "consistency_error";
    case ErrorClass::kLeakage:
      return "leakage_error";
    case ErrorClass::kBuild:
      return "build_error";
    case ErrorClass::kEpisode:
      return "episode_error";
    case ErrorClass::kCorruption:
      return "corruption_error";
    case ErrorClass::kEvaluation:
      return "evaluation_error";
    case ErrorClass::kConfig:
      return "config_error";
    case ErrorClass::kNumeric:
      return "numeric_error";
    case ErrorClass::kLoad:
      return "load_error";
    case ErrorClass::kChecksum:
      return "checksum_error";
    case ErrorClass::kInput:
      return "input_error";
    case ErrorClass::kIo:
      return "io_error";
  }
  return "error";
}

}  // namespace metarh
