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
#include <random>

namespace channelpress {

/// Seeded random source used for every stochastic step in the project.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform and normal variates are derived here rather than through
/// the <random> distributions (whose algorithms are implementation defined),
/// so datasets are reproducible across standard libraries. Binomial draws
/// (shot sampling only) go through std::binomial_distribution.
class Rng {
   public:
    static constexpr const char* kGeneratorName = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on [low, high).
    double uniform(double low, double high) { return low + (high - low) * uniform(); }
    /// Uniform integer in [0, count).
    std::uint64_t index(std::uint64_t count);
    /// Normal(mu, sigma) via Box-Muller.
    double normal(double mu, double sigma);
    std::uint64_t binomial(std::uint64_t trials, double p);

    std::mt19937_64& engine() { return engine_; }

   private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Deterministic child seed for an independent stream (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace channelpress
