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
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "channelpress/linalg.hpp"
#include "json.hpp"

namespace channelpress {

enum class GateKind { RX, RY, RZ, H, X, Y, Z, CX };

std::string_view gate_name(GateKind kind);
GateKind gate_kind_from_name(std::string_view name);
bool is_rotation(GateKind kind);

struct BoundAngle {
    double value = 0.0;
    bool operator==(const BoundAngle&) const = default;
};

/// Index into the circuit's parameter vector.
struct SymbolicParam {
    int index = 0;
    bool operator==(const SymbolicParam&) const = default;
};

using GateParam = std::variant<std::monostate, BoundAngle, SymbolicParam>;

/// Rotations follow R_P(theta) = exp(-i theta P / 2).
struct Gate {
    GateKind kind = GateKind::H;
    std::vector<int> targets;
    GateParam param;

    static Gate fixed(GateKind kind, int qubit) { return {kind, {qubit}, {}}; }
    static Gate cx(int control, int target) { return {GateKind::CX, {control, target}, {}}; }
    static Gate bound(GateKind kind, int qubit, double angle) { return {kind, {qubit}, BoundAngle{angle}}; }
    static Gate symbolic(GateKind kind, int qubit, int index) { return {kind, {qubit}, SymbolicParam{index}}; }

    bool operator==(const Gate&) const = default;
};

/// 2x2 matrix of a single-qubit gate; `angle` is ignored for fixed gates.
ComplexMatrix single_qubit_matrix(GateKind kind, double angle);

class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(int n_qubits);
    /// n_params < 0 means "one more than the largest symbolic index".
    Circuit(int n_qubits, std::vector<Gate> gates, int n_params = -1);

    /// Validates and appends; grows n_params to cover a new symbolic index.
    void append(Gate gate);

    int n_qubits() const { return n_qubits_; }
    int n_params() const { return n_params_; }
    const std::vector<Gate>& gates() const { return gates_; }

    /// Copy with every symbolic parameter replaced by its bound value.
    Circuit bind(std::span<const double> params) const;

    bool operator==(const Circuit&) const = default;

   private:
    int n_qubits_ = 0;
    std::vector<Gate> gates_;
    int n_params_ = 0;
};

/// Compiles the circuit; the first gate in the list acts first.
ComplexMatrix unitary_of(const Circuit& circuit, std::span<const double> params = {});

/// Adjoint circuit: gates reversed, rotation angles negated. Requires a
/// fully bound circuit.
Circuit inverse(const Circuit& circuit);

enum class Entanglement { Linear, Full };

/// Layered RY / CX ansatz: one RY layer, then `layers` repetitions of
/// [CX block, RY layer]. Parameters are numbered in generation order.
struct AnsatzSpec {
    int n_qubits = 1;
    int layers = 1;
    Entanglement entanglement = Entanglement::Linear;

    int n_params() const { return n_qubits * (layers + 1); }
    bool operator==(const AnsatzSpec&) const = default;
};

Circuit real_amplitudes(const AnsatzSpec& spec);

/// Fully bound random circuit. Each depth layer gives every qubit one gate
/// drawn uniformly from {H, RX, RY, RZ} (angles uniform on [0, 2pi)), then
/// shuffles the qubits, pairs neighbours in the shuffled order, and places
/// CX(first, second) on each pair with probability 1/2.
Circuit random_circuit(int n_qubits, int depth, std::uint64_t seed);

/// `count` vectors of `length` i.i.d. Normal(mu, sigma) entries.
std::vector<std::vector<double>> sample_params(int count, int length, double mu, double sigma,
                                               std::uint64_t seed);

nlohmann::json to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

std::string_view entanglement_name(Entanglement e);
Entanglement entanglement_from_name(std::string_view name);

}  // namespace channelpress
