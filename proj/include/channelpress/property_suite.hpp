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
#include <string>
#include <vector>

#include "channelpress/linalg.hpp"
#include "channelpress/rng.hpp"
#include "json.hpp"

namespace channelpress {

/// Outcome of one randomized invariant check. `worst` is the largest
/// observed violation measure, compared against `tolerance`.
struct PropertyResult {
    std::string name;
    bool passed = false;
    int cases = 0;
    double worst = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

/// Ginibre-distributed density matrix of the given rank.
ComplexMatrix random_density(int n_qubits, int rank, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix random_unitary(int n_qubits, Rng& rng);

PropertyResult check_fidelity_axioms(std::uint64_t seed, int cases = 200);
PropertyResult check_rank_fidelity_bound(std::uint64_t seed, int cases = 200);
PropertyResult check_choi_roundtrip(std::uint64_t seed, int cases = 100);
PropertyResult check_gradient_consistency(std::uint64_t seed, int cases = 20);
PropertyResult check_full_fidelity_identity(std::uint64_t seed, int cases = 50);
PropertyResult check_determinism(std::uint64_t seed);

/// Every property above with its default case count.
std::vector<PropertyResult> run_property_suite(std::uint64_t seed);

nlohmann::json to_json(const PropertyResult& r);

}  // namespace channelpress
