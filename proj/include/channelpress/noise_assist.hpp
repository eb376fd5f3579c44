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

#include <vector>

#include "channelpress/autoencoder.hpp"
#include "channelpress/channel.hpp"
#include "json.hpp"

namespace channelpress {

// Noise-assisted reconstruction: instead of padding the latent channel with
// the identity on the trash qubits, pad it with a product noise channel
// estimated from the trash channel's Choi state.

/// Measured populations of one (reference k, trash output k) pair.
struct NoisePairSpec {
    double alpha0 = 0.0;  // <00| . |00>
    double alpha1 = 0.0;  // <11| . |11>
};

/// Per-pair diagonal Choi entries after clamping; `clamped` records whether
/// an alpha above 1/2 had to be pulled back.
struct NoisePair {
    NoisePairSpec spec;
    double d00, d01, d10, d11;
    bool clamped = false;
};

/// Choi state of the trash channel C1 -> C2 in canonical [references,
/// outputs] layout.
ChoiMatrix trash_choi(const MixedUnitaryChannel& e, const AutoencoderModel& model);

NoisePairSpec measure_alphas(const ChoiMatrix& j_trash, int k);

/// diag(alpha0, 1/2 - alpha0, 1/2 - alpha1, alpha1) over |ref out>; an
/// alpha above 1/2 zeroes its partner entry and is reset to 1/2.
NoisePair noise_pair(const NoisePairSpec& spec);

/// Product of the per-pair channels, in canonical layout. Throws when the
/// number of specs differs from `trash_qubits`.
ChoiMatrix build_noise_choi(const std::vector<NoisePairSpec>& specs, int trash_qubits);

/// V^dagger o (F kron N) o U^dagger.
ChoiMatrix reconstruct_noisy(const ChoiMatrix& jf, const ChoiMatrix& jn, const AutoencoderModel& model);

struct NoiseAssistedComparison {
    std::vector<double> qcae_fidelity;
    std::vector<double> nqcae_fidelity;
    std::vector<std::vector<NoisePair>> pairs;  // per channel
};

struct NoiseAssistedRun {
    AutoencoderModel model;
    TrainReport report;
    std::vector<ChoiMatrix> noise_chois;  // per channel
    NoiseAssistedComparison comparison;
};

/// Compares identity padding against measured noise padding for every
/// channel of the batch under a fixed model.
NoiseAssistedComparison compare_reconstructions(Batch batch, const AutoencoderModel& model);

/// Trains a model, measures the trash noise per channel and reports the
/// identity-padded and noise-padded reconstruction fidelities side by side.
NoiseAssistedRun run_nqcae(Batch batch, int n, int m, const AnsatzSpec& u_spec, const AnsatzSpec& v_spec,
                           const TrainConfig& config);

nlohmann::json to_json(const NoiseAssistedComparison& comparison);

}  // namespace channelpress
