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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "channelpress/experiments.hpp"
#include "channelpress/noise_assist.hpp"
#include "test_support.hpp"

using namespace channelpress;

namespace {

AutoencoderModel random_model(int n, int m, Rng& rng) {
    const AnsatzSpec spec{n, 2, Entanglement::Linear};
    std::vector<double> theta(static_cast<size_t>(2 * spec.n_params()));
    for (double& x : theta) x = rng.uniform(0.0, 2 * std::numbers::pi);
    return AutoencoderModel::from_specs(n, m, spec, spec, theta);
}

ComplexMatrix diag4(double a, double b, double c, double d) {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = a, m(1, 1) = b, m(2, 2) = c, m(3, 3) = d;
    return m;
}

}  // namespace

TEST(MeasureAlphas, Examples) {
    const auto bell = measure_alphas(identity_choi(1), 0);
    EXPECT_NEAR(bell.alpha0, 0.5, 1e-15);
    EXPECT_NEAR(bell.alpha1, 0.5, 1e-15);
    const auto mixed = measure_alphas(ChoiMatrix(1, 1, maximally_mixed(2)), 0);
    EXPECT_NEAR(mixed.alpha0, 0.25, 1e-15);
    EXPECT_NEAR(mixed.alpha1, 0.25, 1e-15);
    EXPECT_THROW(measure_alphas(identity_choi(1), 1), DimensionError);
    EXPECT_THROW(ChoiMatrix(1, 1, oracle::basis_projector(4, 0)), NumericalError);
}

TEST(MeasureAlphas, UsesPairMarginal) {
    // Pair 1 of (depolarizing x identity) is the identity Choi; pair 0 is omega_4.
    const ChoiMatrix j = tensor_choi(ChoiMatrix(1, 1, maximally_mixed(2)), identity_choi(1));
    EXPECT_NEAR(measure_alphas(j, 0).alpha0, 0.25, 1e-15);
    EXPECT_NEAR(measure_alphas(j, 1).alpha0, 0.5, 1e-15);
    EXPECT_NEAR(measure_alphas(j, 1).alpha1, 0.5, 1e-15);
}

TEST(NoiseChoi, Examples) {
    const ChoiMatrix dephasing = build_noise_choi({{0.5, 0.5}}, 1);
    EXPECT_LT(oracle::max_abs(dephasing.mat() - diag4(0.5, 0, 0, 0.5)), 1e-15);
    const ChoiMatrix depol = build_noise_choi({{0.25, 0.25}}, 1);
    EXPECT_LT(oracle::max_abs(depol.mat() - maximally_mixed(2)), 1e-15);
    const ChoiMatrix two = build_noise_choi({{0.25, 0.25}, {0.25, 0.25}}, 2);
    EXPECT_LT(oracle::max_abs(two.mat() - maximally_mixed(4)), 1e-15);
    const ChoiMatrix skew = build_noise_choi({{0.1, 0.4}}, 1);
    EXPECT_LT(oracle::max_abs(skew.mat() - diag4(0.1, 0.4, 0.1, 0.4)), 1e-15);
    EXPECT_THROW(build_noise_choi({{0.25, 0.25}}, 2), DimensionError);
    EXPECT_THROW(build_noise_choi({}, 0), DimensionError);
}

TEST(NoiseChoi, ClampingKeepsValidChannel) {
    const NoisePair p = noise_pair({0.7, 0.2});
    EXPECT_TRUE(p.clamped);
    EXPECT_DOUBLE_EQ(p.d00, 0.5);
    EXPECT_DOUBLE_EQ(p.d01, 0.0);
    EXPECT_DOUBLE_EQ(p.d11, 0.2);
    EXPECT_DOUBLE_EQ(p.d10, 0.3);
    Rng rng(1);
    for (int c = 0; c < 50; ++c) {
        const double a0 = rng.uniform(), a1 = rng.uniform() * (1.0 - a0);
        const ChoiMatrix j = build_noise_choi({{a0, a1}, {a1, a0}}, 2);
        EXPECT_LE(j.tp_residual(), 1e-12);
        EXPECT_NEAR(j.mat().trace().real(), 1.0, 1e-12);
        EXPECT_GE(hermitian_eig(j.mat()).values.minCoeff(), -1e-15);
    }
}

TEST(TrashChoi, MatchesReducedChoiOfEncodedChannel) {
    Rng rng(2);
    for (int c = 0; c < 4; ++c) {
        const MixedUnitaryChannel e(
            {random_circuit(3, 4, 10 + c), random_circuit(3, 4, 20 + c)}, {0.3, 0.7});
        const AutoencoderModel model = random_model(3, 1 + c % 2, rng);
        const int t = model.trash_qubits();
        std::vector<int> trash;
        for (int k = model.m(); k < 3; ++k) trash.push_back(k);
        const ChoiMatrix reduced = reduced_choi(encoded_choi(e, model), trash, trash);
        const ChoiMatrix jt = trash_choi(e, model);
        EXPECT_EQ(jt.n_in(), t);
        EXPECT_LT(oracle::max_abs(jt.mat() - reduced.mat()), 1e-10);
    }
    const auto depol = MixedUnitaryChannel::depolarizing(2);
    EXPECT_LT(oracle::max_abs(trash_choi(depol, random_model(2, 1, rng)).mat() - maximally_mixed(2)), 1e-12);
}

TEST(ReconstructNoisy, IdentityNoiseEqualsPlainReconstruction) {
    Rng rng(3);
    const MixedUnitaryChannel e = MixedUnitaryChannel::unitary(random_circuit(3, 5, 4));
    const AutoencoderModel model = random_model(3, 1, rng);
    const ChoiMatrix jf = compress(e, model);
    const ChoiMatrix plain = reconstruct(jf, model);
    const ChoiMatrix noisy = reconstruct_noisy(jf, identity_choi(2), model);
    EXPECT_LE(oracle::max_abs(plain.mat() - noisy.mat()), 1e-12);
    EXPECT_THROW(reconstruct_noisy(jf, identity_choi(1), model), DimensionError);
}

TEST(ReconstructNoisy, DepolarizingFamily) {
    Rng rng(4);
    for (int n : {2, 3}) {
        const std::vector<MixedUnitaryChannel> batch = {MixedUnitaryChannel::depolarizing(n)};
        const AutoencoderModel model = random_model(n, n - 1, rng);
        const auto cmp = compare_reconstructions(batch, model);
        EXPECT_NEAR(cmp.nqcae_fidelity[0], 1.0, 1e-8);
        EXPECT_NEAR(cmp.qcae_fidelity[0], std::pow(4.0, n - 1) / std::pow(4.0, n), 1e-8);
    }
}

TEST(ReconstructNoisy, PlantedInstanceFavorsPlainReconstruction) {
    ExperimentConfig cfg;
    cfg.n_qubits = 4;
    cfg.latent_qubits = 2;
    cfg.encoder_ansatz = {4, 2, Entanglement::Linear};
    cfg.data = PlantedData{2, 3};
    cfg.seed = 3;
    const auto inst = gen_planted(cfg);
    const auto model = AutoencoderModel::from_specs(4, 2, cfg.encoder_ansatz, cfg.encoder_ansatz, inst.theta0);
    const auto cmp = compare_reconstructions(inst.dataset.channels, model);
    for (size_t i = 0; i < cmp.qcae_fidelity.size(); ++i) {
        EXPECT_NEAR(cmp.qcae_fidelity[i], 1.0, 1e-8);
        EXPECT_NEAR(cmp.nqcae_fidelity[i], 0.25, 1e-8);
        for (const NoisePair& p : cmp.pairs[i]) {
            EXPECT_NEAR(p.spec.alpha0, 0.5, 1e-9);
            EXPECT_FALSE(p.clamped);
        }
    }
}

TEST(RunNqcae, DepolarizingColumnsAndJson) {
    const std::vector<MixedUnitaryChannel> batch = {MixedUnitaryChannel::depolarizing(2)};
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.seed = 1;
    const AnsatzSpec spec{2, 2, Entanglement::Linear};
    const NoiseAssistedRun run = run_nqcae(batch, 2, 1, spec, spec, cfg);
    ASSERT_EQ(run.noise_chois.size(), 1u);
    EXPECT_GE(run.comparison.nqcae_fidelity[0], run.comparison.qcae_fidelity[0]);
    const auto j = to_json(run.comparison);
    ASSERT_EQ(j["channels"].size(), 1u);
    EXPECT_TRUE(j["channels"][0]["pairs"][0].contains("clamped"));
    const NoiseAssistedRun again = run_nqcae(batch, 2, 1, spec, spec, cfg);
    EXPECT_EQ(to_json(again.comparison).dump(), j.dump());
}
