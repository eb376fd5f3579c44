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
#include <optional>
#include <stdexcept>
#include <string>

#include "channelpress/experiments.hpp"
#include "json.hpp"

namespace channelpress {

/// Invalid configuration; what() is "<file>:<line>: <message>" when the
/// offending key can be located in the source text.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(const std::string& message, int line) : std::runtime_error(message), line_(line) {}
    /// 1-based line, 0 when unknown.
    int line() const { return line_; }

   private:
    int line_;
};

struct LandscapeSpec {
    int i = 0;
    int j = 1;
    int grid = 21;
    double range = 3.141592653589793;
};

/// Everything a subcommand may need. Sections other than `experiment` are
/// optional and checked by the subcommand that uses them.
struct RunConfig {
    ExperimentConfig experiment;
    std::optional<LandscapeSpec> landscape;
    /// Pretrained model for compress, reconstruct, landscape and bound.
    std::optional<std::filesystem::path> model_path;
};

/// Parses config text. Relative paths inside resolve against `base_dir`;
/// `source_name` prefixes error messages.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                       const std::string& source_name = "config");
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON for a parsed config (round-trips through parse_config).
nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const TrainConfig& cfg);

}  // namespace channelpress
