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

#include "channelpress/noise_assist.hpp"

#include <algorithm>

namespace channelpress {

ChoiMatrix trash_choi(const MixedUnitaryChannel& e, const AutoencoderModel& model) {
    const int t = model.trash_qubits();
    // trash_state is ordered [outputs, references]; swap the two halves.
    std::vector<int> perm(static_cast<size_t>(2 * t));
    for (int k = 0; k < t; ++k) {
        perm[static_cast<size_t>(k)] = t + k;
        perm[static_cast<size_t>(t + k)] = k;
    }
    return ChoiMatrix::trusted(t, t, permute_qubits(trash_state(e, model), 2 * t, perm));
}

NoisePairSpec measure_alphas(const ChoiMatrix& j_trash, int k) {
    if (j_trash.n_in() != j_trash.n_out()) throw DimensionError("measure_alphas: trash Choi must be square");
    const int t = j_trash.n_in();
    if (k < 0 || k >= t) throw DimensionError("measure_alphas: pair index out of range");
    const int keep[2] = {k, t + k};
    const ComplexMatrix pair = partial_trace(j_trash.mat(), 2 * t, keep);
    return {std::clamp(pair(0, 0).real(), 0.0, 1.0), std::clamp(pair(3, 3).real(), 0.0, 1.0)};
}

NoisePair noise_pair(const NoisePairSpec& spec) {
    NoisePair out{spec, 0.0, 0.0, 0.0, 0.0, false};
    auto split = [&](double alpha, double& same, double& flip) {
        alpha = std::max(alpha, 0.0);
        if (alpha > 0.5) {
            same = 0.5;
            flip = 0.0;
            out.clamped = true;
        } else {
            same = alpha;
            flip = 0.5 - alpha;
        }
    };
    split(spec.alpha0, out.d00, out.d01);
    split(spec.alpha1, out.d11, out.d10);
    return out;
}

ChoiMatrix build_noise_choi(const std::vector<NoisePairSpec>& specs, int trash_qubits) {
    if (static_cast<int>(specs.size()) != trash_qubits || specs.empty()) {
        throw DimensionError("build_noise_choi: need one spec per trash pair (" + std::to_string(trash_qubits) +
                             "), got " + std::to_string(specs.size()));
    }
    std::optional<ChoiMatrix> acc;
    for (const auto& spec : specs) {
        const NoisePair p = noise_pair(spec);
        ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
        diag(0, 0) = p.d00;
        diag(1, 1) = p.d01;
        diag(2, 2) = p.d10;
        diag(3, 3) = p.d11;
        ChoiMatrix pair = ChoiMatrix::trusted(1, 1, std::move(diag));
        acc = acc ? tensor_choi(*acc, pair) : pair;
    }
    return *acc;
}

ChoiMatrix reconstruct_noisy(const ChoiMatrix& jf, const ChoiMatrix& jn, const AutoencoderModel& model) {
    if (jf.n_in() != model.m() || jf.n_out() != model.m()) {
        throw DimensionError("reconstruct_noisy: latent Choi does not match the model");
    }
    if (jn.n_in() != model.trash_qubits() || jn.n_out() != model.trash_qubits()) {
        throw DimensionError("reconstruct_noisy: noise Choi does not match the trash size");
    }
    return conjugate_choi(tensor_choi(jf, jn), ComplexMatrix(model.u_unitary().adjoint()),
                          ComplexMatrix(model.v_unitary().adjoint()));
}

namespace {

std::vector<NoisePairSpec> measure_all(const ChoiMatrix& j_trash) {
    std::vector<NoisePairSpec> specs;
    for (int k = 0; k < j_trash.n_in(); ++k) specs.push_back(measure_alphas(j_trash, k));
    return specs;
}

}  // namespace

NoiseAssistedComparison compare_reconstructions(Batch batch, const AutoencoderModel& model) {
    NoiseAssistedComparison out;
    for (const auto& e : batch) {
        const ChoiMatrix je = choi_of_mixed(e);
        const ChoiMatrix jf = compress(e, model);
        const auto specs = measure_all(trash_choi(e, model));
        const ChoiMatrix jn = build_noise_choi(specs, model.trash_qubits());
        out.qcae_fidelity.push_back(channel_fidelity(reconstruct(jf, model), je));
        out.nqcae_fidelity.push_back(channel_fidelity(reconstruct_noisy(jf, jn, model), je));
        std::vector<NoisePair> pairs;
        for (const auto& s : specs) pairs.push_back(noise_pair(s));
        out.pairs.push_back(std::move(pairs));
    }
    return out;
}

NoiseAssistedRun run_nqcae(Batch batch, int n, int m, const AnsatzSpec& u_spec, const AnsatzSpec& v_spec,
                           const TrainConfig& config) {
    auto [model, report] = train(batch, n, m, u_spec, v_spec, config);
    NoiseAssistedRun run{model, std::move(report), {}, compare_reconstructions(batch, model)};
    for (const auto& e : batch) {
        run.noise_chois.push_back(build_noise_choi(measure_all(trash_choi(e, model)), model.trash_qubits()));
    }
    return run;
}

nlohmann::json to_json(const NoiseAssistedComparison& comparison) {
    nlohmann::json channels = nlohmann::json::array();
    for (size_t i = 0; i < comparison.qcae_fidelity.size(); ++i) {
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& p : comparison.pairs[i]) {
            pairs.push_back({{"alpha0", p.spec.alpha0}, {"alpha1", p.spec.alpha1}, {"clamped", p.clamped}});
        }
        channels.push_back({{"qcae_fidelity", comparison.qcae_fidelity[i]},
                            {"nqcae_fidelity", comparison.nqcae_fidelity[i]},
                            {"pairs", std::move(pairs)}});
    }
    return {{"channels", std::move(channels)}};
}

}  // namespace channelpress
