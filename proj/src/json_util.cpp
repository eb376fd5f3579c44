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

#include "channelpress/json_util.hpp"

#include <algorithm>
#include <fstream>

namespace channelpress {

void require_only_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                       std::string_view context) {
    if (!j.is_object()) throw SchemaError(std::string(context) + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw SchemaError(std::string(context) + ": unknown key \"" + key + "\"", key);
        }
    }
}

const nlohmann::json& require_key(const nlohmann::json& j, std::string_view key, std::string_view context) {
    if (!j.is_object()) throw SchemaError(std::string(context) + ": expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) {
        throw SchemaError(std::string(context) + ": missing required key \"" + std::string(key) + "\"",
                          std::string(key));
    }
    return *it;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << text;
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace channelpress
