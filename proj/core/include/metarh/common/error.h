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

#ifndef METARH_COMMON_ERROR_H_
#define METARH_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace metarh {

// Every failure raised by the library carries one of these classes. The CLI
// maps them onto exit codes and prints the class name as the first token of
// its error line.
enum class ErrorClass {
  kParse,
  kSchema,
  kConsistency,
  kLeakage,
  kBuild,
  kEpisode,
  kCorruption,
  kEvaluation,
  kConfig,
  kNumeric,
  kLoad,
  kChecksum,
  kInput,
  kIo,
};

std::string_view ErrorClassName(ErrorClass error_class);

class Error : public std::runtime_error {
 public:
  Error(ErrorClass error_class, const std::string& message)
      : std::runtime_error(message), error_class_(error_class) {}

  ErrorClass error_class() const { return error_class_; }

 private:
  ErrorClass error_class_;
};

// Parse failures remember the 1-based line they came from.
class ParseError : public Error {
 public:
  ParseError(ErrorClass error_class, std::size_t line,
             const std::string& message)
      : Error(error_class,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace metarh

#endif  // METARH_COMMON_ERROR_H_
