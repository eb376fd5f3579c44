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

#include "channelpress/circuit.hpp"
#include "channelpress/rng.hpp"
#include "test_support.hpp"

using namespace channelpress;

namespace {

int count_kind(const Circuit& c, GateKind kind) {
    int n = 0;
    for (const auto& g : c.gates()) n += g.kind == kind;
    return n;
}

}  // namespace

TEST(UnitaryOf, EmptyCircuitIsIdentity) {
    EXPECT_LT(max_abs_entry(unitary_of(Circuit(3)) - identity(3)), 1e-15);
}

TEST(UnitaryOf, RotationConvention) {
    Circuit c(1);
    c.append(Gate::bound(GateKind::RY, 0, std::numbers::pi));
    ComplexMatrix expected(2, 2);
    expected << 0, -1, 1, 0;
    EXPECT_LT(max_abs_entry(unitary_of(c) - expected), 1e-15);

    // exp(-i theta P / 2) for each axis, checked against cos/sin expansion.
    const double theta = 0.7;
    for (auto [kind, p] : {std::pair{GateKind::RX, 'X'}, std::pair{GateKind::RY, 'Y'}, std::pair{GateKind::RZ, 'Z'}}) {
        const ComplexMatrix want =
            std::cos(theta / 2) * identity(1) - cplx(0, 1) * std::sin(theta / 2) * oracle::pauli(p);
        EXPECT_LT(max_abs_entry(single_qubit_matrix(kind, theta) - want), 1e-15);
    }
}

TEST(UnitaryOf, BellStateFromStatevectorOracle) {
    Circuit c(2);
    c.append(Gate::fixed(GateKind::H, 0));
    c.append(Gate::cx(0, 1));
    const ComplexMatrix u = unitary_of(c);
    // Oracle: H on qubit 0 then CX(0 -> 1), applied to |00> by hand.
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd after_h(4);
    after_h << r, 0, r, 0;  // (|00> + |10>)/sqrt2 with qubit 0 the high bit
    Eigen::VectorXcd after_cx(4);
    after_cx << after_h(0), after_h(1), after_h(3), after_h(2);
    EXPECT_LT((u.col(0) - after_cx).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(std::abs(u(3, 0)), r, 1e-15);
}

TEST(UnitaryOf, GatesActLeftToRight) {
    Circuit c(1);
    c.append(Gate::fixed(GateKind::H, 0));
    c.append(Gate::fixed(GateKind::Z, 0));
    const ComplexMatrix h = single_qubit_matrix(GateKind::H, 0.0), z = single_qubit_matrix(GateKind::Z, 0.0);
    EXPECT_LT(max_abs_entry(unitary_of(c) - z * h), 1e-15);
}

TEST(UnitaryOf, ParameterCountMismatchThrows) {
    const Circuit c = real_amplitudes({2, 1, Entanglement::Linear});
    const std::vector<double> short_params(3, 0.0);
    EXPECT_THROW(unitary_of(c, short_params), DimensionError);
}

TEST(UnitaryOf, RandomParamsStayUnitaryAndContinuous) {
    const Circuit c = real_amplitudes({3, 2, Entanglement::Full});
    Rng rng(4);
    std::vector<double> theta(static_cast<size_t>(c.n_params()));
    for (double& x : theta) x = rng.uniform(0.0, 2 * std::numbers::pi);
    const ComplexMatrix u = unitary_of(c, theta);
    EXPECT_LT(unitarity_residual(u), 1e-10);
    auto nudged = theta;
    for (double& x : nudged) x += 1e-6;
    EXPECT_LE(max_abs_entry(unitary_of(c, nudged) - u), 10.0 * c.n_params() * 1e-6);
}

TEST(RealAmplitudes, GateCounts) {
    const Circuit a = real_amplitudes({4, 2, Entanglement::Linear});
    EXPECT_EQ(a.n_params(), 12);
    EXPECT_EQ(count_kind(a, GateKind::CX), 6);
    const Circuit b = real_amplitudes({1, 1, Entanglement::Linear});
    EXPECT_EQ(count_kind(b, GateKind::RY), 2);
    EXPECT_EQ(count_kind(b, GateKind::CX), 0);
    const Circuit c = real_amplitudes({4, 1, Entanglement::Full});
    EXPECT_EQ(c.n_params(), 8);
    EXPECT_EQ(count_kind(c, GateKind::CX), 6);
    EXPECT_THROW(real_amplitudes({0, 1, Entanglement::Linear}), DimensionError);
}

TEST(RealAmplitudes, StructureAndParameterOrder) {
    const Circuit a = real_amplitudes({3, 1, Entanglement::Linear});
    ASSERT_EQ(a.gates().size(), 8u);
    for (int q = 0; q < 3; ++q) EXPECT_EQ(a.gates()[static_cast<size_t>(q)], Gate::symbolic(GateKind::RY, q, q));
    EXPECT_EQ(a.gates()[3], Gate::cx(0, 1));
    EXPECT_EQ(a.gates()[4], Gate::cx(1, 2));
    for (int q = 0; q < 3; ++q) EXPECT_EQ(a.gates()[static_cast<size_t>(5 + q)], Gate::symbolic(GateKind::RY, q, 3 + q));
}

TEST(CircuitValidation, RejectsMalformedGates) {
    Circuit c(2);
    EXPECT_THROW(c.append(Gate::cx(0, 0)), DimensionError);
    EXPECT_THROW(c.append(Gate::fixed(GateKind::H, 2)), DimensionError);
    EXPECT_THROW(c.append(Gate{GateKind::H, {0}, SymbolicParam{0}}), DimensionError);
}

TEST(RandomCircuit, DeterministicUnitaryAndSeedSensitive) {
    EXPECT_EQ(random_circuit(4, 10, 42), random_circuit(4, 10, 42));
    const ComplexMatrix u = unitary_of(random_circuit(4, 10, 42));
    EXPECT_LT(unitarity_residual(u), 1e-10);
    for (std::uint64_t s = 0; s < 10; ++s) {
        EXPECT_GT(max_abs_entry(unitary_of(random_circuit(4, 10, s)) - unitary_of(random_circuit(4, 10, s + 100))),
                  1e-3);
    }
    const Circuit c = random_circuit(4, 3, 1);
    EXPECT_EQ(c.n_params(), 0);
    int single = 0;
    for (const auto& g : c.gates()) single += g.kind != GateKind::CX;
    EXPECT_EQ(single, 12);
}

TEST(SampleParams, DeterminismDegenerateAndMoments) {
    const auto a = sample_params(3, 5, 0.2, 0.0, 1);
    for (const auto& v : a)
        for (double x : v) EXPECT_EQ(x, 0.2);
    EXPECT_EQ(sample_params(4, 3, 0.0, 0.1, 9), sample_params(4, 3, 0.0, 0.1, 9));
    const auto big = sample_params(100, 100, 0.0, 0.1, 5);
    double sum = 0.0, sq = 0.0;
    for (const auto& v : big)
        for (double x : v) sum += x, sq += x * x;
    const double mean = sum / 1e4, sd = std::sqrt(sq / 1e4 - mean * mean);
    EXPECT_NEAR(mean, 0.0, 0.01);
    EXPECT_NEAR(sd, 0.1, 0.01);
}

TEST(CircuitJson, BitExactRoundTrip) {
    Circuit c = real_amplitudes({3, 2, Entanglement::Full});
    c.append(Gate::bound(GateKind::RZ, 1, 0.1 + 0.2));
    c.append(Gate::fixed(GateKind::Y, 2));
    const nlohmann::json j = to_json(c);
    const Circuit back = circuit_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back, c);
    const auto& rz = back.gates()[back.gates().size() - 2];
    EXPECT_EQ(std::get<BoundAngle>(rz.param).value, 0.1 + 0.2);
}

TEST(CircuitJson, RejectsUnknownKeys) {
    nlohmann::json j = to_json(real_amplitudes({2, 1, Entanglement::Linear}));
    j["extra"] = 1;
    EXPECT_ANY_THROW(circuit_from_json(j));
}

TEST(Inverse, UndoesCircuit) {
    const Circuit c = random_circuit(3, 5, 8);
    Circuit both(3);
    for (const auto& g : c.gates()) both.append(g);
    const Circuit inv = inverse(c);
    for (const auto& g : inv.gates()) both.append(g);
    EXPECT_LT(max_abs_entry(unitary_of(both) - identity(3)), 1e-13);
    EXPECT_THROW(inverse(real_amplitudes({2, 1, Entanglement::Linear})), DimensionError);
}
