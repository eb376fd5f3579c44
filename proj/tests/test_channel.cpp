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

#include <string>
#include <vector>

#include "channelpress/channel.hpp"
#include "channelpress/property_suite.hpp"
#include "test_support.hpp"

using namespace channelpress;

namespace {

// Kraus-sum channel application written out directly.
ComplexMatrix apply_oracle(const MixedUnitaryChannel& e, const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const ComplexMatrix u = unitary_of(e.members()[i]);
        out += e.probs()[i] * u * rho * u.adjoint();
    }
    return out;
}

ComplexMatrix pauli_string(const std::string& s) {
    ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    for (char c : s) m = oracle::kron(m, oracle::pauli(c));
    return m;
}

}  // namespace

TEST(Choi, IdentityIsMaximallyEntangled) {
    EXPECT_LT(oracle::max_abs(identity_choi(1).mat() - oracle::bell_density(1)), 1e-15);
    EXPECT_LT(oracle::max_abs(identity_choi(2).mat() - oracle::bell_density(2)), 1e-15);
}

TEST(Choi, UnitaryMatchesExplicitSum) {
    Rng rng(2);
    for (int n = 1; n <= 2; ++n) {
        const ComplexMatrix u = random_unitary(n, rng);
        EXPECT_LT(oracle::max_abs(choi_of_unitary(u).mat() - oracle::choi_of_unitary(u)), 1e-14);
    }
}

TEST(Choi, SingleQubitDepolarizingIsMaximallyMixed) {
    const auto e = MixedUnitaryChannel::depolarizing(1);
    EXPECT_EQ(e.size(), 4u);
    EXPECT_LT(oracle::max_abs(choi_of_mixed(e).mat() - maximally_mixed(2)), 1e-15);
}

TEST(Choi, TwoQubitDepolarizingIsMaximallyMixed) {
    const auto e = MixedUnitaryChannel::depolarizing(2);
    EXPECT_EQ(e.size(), 16u);
    EXPECT_LT(oracle::max_abs(choi_of_mixed(e).mat() - maximally_mixed(4)), 1e-15);
    EXPECT_NEAR(top_k_eigenvalue_sum(choi_of_mixed(e), 4), 0.25, 1e-12);
}

TEST(Choi, RankEightPauliMixtureHasFlatSpectrum) {
    const std::vector<std::string> paulis = {"II", "IX", "XI", "XX", "YI", "YX", "ZI", "ZX"};
    const auto e = MixedUnitaryChannel::pauli_mixture(paulis);
    const auto eig = hermitian_eig(choi_of_mixed(e).mat());
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(eig.values(k), 0.125, 1e-12);
    for (int k = 8; k < 16; ++k) EXPECT_NEAR(eig.values(k), 0.0, 1e-12);
    EXPECT_NEAR(top_k_eigenvalue_sum(choi_of_mixed(e), 4), 0.5, 1e-12);
}

TEST(Channel, PauliStringCharacterOrder) {
    const std::vector<std::string> xi = {"XI"};
    const auto e = MixedUnitaryChannel::pauli_mixture(xi);
    EXPECT_LT(oracle::max_abs(e.unitaries()[0] - pauli_string("XI")), 1e-15);
    // X on qubit 0 maps |00> to |10>, index 2 in big-endian order.
    EXPECT_NEAR(e.apply(oracle::basis_projector(4, 0))(2, 2).real(), 1.0, 1e-15);
}

TEST(Channel, RejectsBadProbabilities) {
    std::vector<Circuit> members = {Circuit(1), Circuit(1)};
    EXPECT_ANY_THROW(MixedUnitaryChannel(members, {0.5, 0.6}));
    EXPECT_ANY_THROW(MixedUnitaryChannel(members, {1.2, -0.2}));
    EXPECT_ANY_THROW(MixedUnitaryChannel(members, {1.0}));
    EXPECT_ANY_THROW(MixedUnitaryChannel({Circuit(1), Circuit(2)}, {0.5, 0.5}));
}

TEST(ApplyChoi, MatchesKrausSum) {
    Rng rng(6);
    std::vector<Circuit> members;
    for (int i = 0; i < 3; ++i) members.push_back(random_circuit(2, 4, 100 + i));
    const MixedUnitaryChannel e(members, {0.2, 0.3, 0.5});
    const ChoiMatrix j = choi_of_mixed(e);
    for (int c = 0; c < 5; ++c) {
        const ComplexMatrix rho = random_density(2, 1 + c % 4, rng);
        EXPECT_LT(oracle::max_abs(apply_choi(j, rho) - apply_oracle(e, rho)), 1e-13);
        EXPECT_LT(oracle::max_abs(e.apply(rho) - apply_oracle(e, rho)), 1e-13);
    }
}

TEST(ConjugateChoi, MatchesComposedUnitary) {
    Rng rng(8);
    const ComplexMatrix w = random_unitary(2, rng), u = random_unitary(2, rng), v = random_unitary(2, rng);
    const ChoiMatrix j = conjugate_choi(choi_of_unitary(w), u, v);
    EXPECT_LT(oracle::max_abs(j.mat() - oracle::choi_of_unitary(v * w * u)), 1e-13);
    const ChoiMatrix only_post = conjugate_choi(choi_of_unitary(w), std::nullopt, v);
    EXPECT_LT(oracle::max_abs(only_post.mat() - oracle::choi_of_unitary(v * w)), 1e-13);
}

TEST(ConjugateChoi, MatchesMemberwiseConjugationOfMixture) {
    Rng rng(10);
    const auto e = MixedUnitaryChannel::pauli_mixture(std::vector<std::string>{"XZ", "YY", "IZ"});
    const ComplexMatrix u = random_unitary(2, rng), v = random_unitary(2, rng);
    ComplexMatrix expected = ComplexMatrix::Zero(16, 16);
    for (std::size_t i = 0; i < e.size(); ++i)
        expected += e.probs()[i] * oracle::choi_of_unitary(v * e.unitaries()[i] * u);
    EXPECT_LT(oracle::max_abs(conjugate_choi(choi_of_mixed(e), u, v).mat() - expected), 1e-13);
}

TEST(TensorChoi, ProductOfUnitariesAndIdentities) {
    Rng rng(12);
    const ComplexMatrix a = random_unitary(1, rng), b = random_unitary(2, rng);
    const ChoiMatrix j = tensor_choi(choi_of_unitary(a), choi_of_unitary(b));
    EXPECT_EQ(j.n_in(), 3);
    EXPECT_LT(oracle::max_abs(j.mat() - oracle::choi_of_unitary(oracle::kron(a, b))), 1e-13);
    EXPECT_LT(oracle::max_abs(tensor_choi(identity_choi(1), identity_choi(1)).mat() - oracle::bell_density(2)),
              1e-15);
}

TEST(TensorChoi, DepolarizingTimesIdentity) {
    // omega_4 (x) phi+ reordered to [refs, outs] has fidelity 1/4 with omega_16.
    const ChoiMatrix j = tensor_choi(choi_of_mixed(MixedUnitaryChannel::depolarizing(1)), identity_choi(1));
    EXPECT_NEAR(channel_fidelity(j, choi_of_mixed(MixedUnitaryChannel::depolarizing(2))), 0.25, 1e-12);
    EXPECT_NEAR(channel_fidelity(j, identity_choi(2)), 0.25, 1e-12);
}

TEST(ReducedChoi, TracesOutSubsystems) {
    Rng rng(14);
    const ComplexMatrix a = random_unitary(1, rng), b = random_unitary(1, rng);
    const ChoiMatrix j = tensor_choi(choi_of_unitary(a), choi_of_unitary(b));
    const int first[] = {0};
    const int second[] = {1};
    EXPECT_LT(oracle::max_abs(reduced_choi(j, first, first).mat() - oracle::choi_of_unitary(a)), 1e-13);
    EXPECT_LT(oracle::max_abs(reduced_choi(j, second, second).mat() - oracle::choi_of_unitary(b)), 1e-13);
    // Input 0 with output 1 of a product channel is uncorrelated.
    EXPECT_LT(oracle::max_abs(reduced_choi(j, first, second).mat() - maximally_mixed(2)), 1e-13);
    const int bad[] = {2};
    EXPECT_THROW(reduced_choi(j, bad, first), DimensionError);
}

TEST(ChoiMatrix, InvariantsAreEnforced) {
    EXPECT_THROW(ChoiMatrix(1, 1, ComplexMatrix::Identity(4, 4)), NumericalError);
    ComplexMatrix not_tp = ComplexMatrix::Zero(4, 4);
    not_tp(0, 0) = 1.0;
    EXPECT_THROW(ChoiMatrix(1, 1, not_tp), NumericalError);
    EXPECT_THROW(ChoiMatrix(1, 1, maximally_mixed(3)), DimensionError);
    const ChoiMatrix ok(1, 1, maximally_mixed(2));
    EXPECT_FALSE(ok.tp_warning());
    EXPECT_NEAR(tp_residual(oracle::bell_density(2), 2, 2), 0.0, 1e-15);
}

TEST(ChoiFactor, ReproducesChoi) {
    std::vector<Circuit> members;
    for (int i = 0; i < 4; ++i) members.push_back(random_circuit(2, 3, 7 + i));
    const MixedUnitaryChannel e(members, {0.1, 0.2, 0.3, 0.4});
    const ComplexMatrix k = choi_factor_of_mixed(e);
    EXPECT_LT(oracle::max_abs(k * k.adjoint() - choi_of_mixed(e).mat()), 1e-13);
}

TEST(ChannelFidelity, UnitaryOverlapFormula) {
    Rng rng(16);
    const ComplexMatrix u = random_unitary(2, rng), v = random_unitary(2, rng);
    const double overlap = std::norm((u.adjoint() * v).trace()) / 16.0;
    EXPECT_NEAR(channel_fidelity(choi_of_unitary(u), choi_of_unitary(v)), overlap, 1e-12);
    EXPECT_THROW(channel_fidelity(identity_choi(1), identity_choi(2)), DimensionError);
}

TEST(ChannelJson, RoundTrips) {
    const auto e = MixedUnitaryChannel::pauli_mixture(std::vector<std::string>{"XY", "ZI"});
    const auto back = channel_from_json(nlohmann::json::parse(to_json(e).dump()));
    EXPECT_EQ(back.members(), e.members());
    EXPECT_EQ(back.probs(), e.probs());
    const ChoiMatrix j = choi_of_mixed(e);
    const ChoiMatrix jb = choi_from_json(nlohmann::json::parse(to_json(j).dump()));
    EXPECT_EQ(jb.mat(), j.mat());
}
