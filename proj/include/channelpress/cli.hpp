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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace channelpress {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

struct CliInvocation {
    std::string subcommand;
    std::filesystem::path config_path;
    std::filesystem::path output_dir;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::uint64_t> shots_override;
};

/// Runs one subcommand; progress goes to `out`, errors to `err`.
int dispatch(const CliInvocation& invocation, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches.
int run_cli(int argc, char** argv);

}  // namespace channelpress
