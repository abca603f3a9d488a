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

#ifndef METARH_COMMON_HASHING_H_
#define METARH_COMMON_HASHING_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace metarh {

// Lower-case hex SHA-1 of `data`.
std::string Sha1Hex(std::string_view data);

// Hash git assigns to a blob with these contents ("blob <size>\0" prefix).
std::string GitBlobHash(std::string_view contents);
std::string GitBlobHashOfFile(const std::filesystem::path& path);

// First eight bytes of SHA-1, big-endian, as an integer.
std::uint64_t Sha1Prefix64(std::string_view data);

std::uint32_t Crc32(std::span<const unsigned char> bytes);

}  // namespace metarh

#endif  // METARH_COMMON_HASHING_H_
