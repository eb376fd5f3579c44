// Copyright 2026 The channelpress Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace channelpress {

/// Malformed or unexpected content in a JSON document. `key` names the
/// offending member when there is one, so callers can point at its line.
class SchemaError : public std::invalid_argument {
   public:
    SchemaError(const std::string& message, std::string key = {})
        : std::invalid_argument(message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

   private:
    std::string key_;
};

/// Rejects any member of `j` not listed in `allowed`.
void require_only_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                       std::string_view context);

/// j[key] or a SchemaError naming the missing key.
const nlohmann::json& require_key(const nlohmann::json& j, std::string_view key, std::string_view context);

/// Writes `text` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

/// Pretty-printed JSON followed by a newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace channelpress
