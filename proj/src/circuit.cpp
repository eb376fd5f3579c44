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

#include "channelpress/circuit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "channelpress/json_util.hpp"
#include "channelpress/rng.hpp"

namespace channelpress {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 8> kGateNames{{
    {GateKind::RX, "RX"},
    {GateKind::RY, "RY"},
    {GateKind::RZ, "RZ"},
    {GateKind::H, "H"},
    {GateKind::X, "X"},
    {GateKind::Y, "Y"},
    {GateKind::Z, "Z"},
    {GateKind::CX, "CX"},
}};

void validate_gate(const Gate& gate, int n_qubits) {
    const size_t arity = gate.kind == GateKind::CX ? 2 : 1;
    if (gate.targets.size() != arity) {
        throw DimensionError(std::string(gate_name(gate.kind)) + " expects " + std::to_string(arity) +
                             " target(s)");
    }
    for (int q : gate.targets) {
        if (q < 0 || q >= n_qubits) {
            throw DimensionError("gate target " + std::to_string(q) + " out of range for " +
                                 std::to_string(n_qubits) + " qubits");
        }
    }
    if (arity == 2 && gate.targets[0] == gate.targets[1]) {
        throw DimensionError("CX control and target must differ");
    }
    const bool has_param = !std::holds_alternative<std::monostate>(gate.param);
    if (is_rotation(gate.kind) != has_param) {
        throw DimensionError(std::string(gate_name(gate.kind)) +
                             (has_param ? " does not take a parameter" : " requires a parameter"));
    }
    if (const auto* sym = std::get_if<SymbolicParam>(&gate.param); sym && sym->index < 0) {
        throw DimensionError("symbolic parameter index must be nonnegative");
    }
}

// Left-multiplies `u` in place by the single-qubit gate g on qubit q.
void apply_single(ComplexMatrix& u, const ComplexMatrix& g, int q, int n_qubits) {
    const Eigen::Index mask = Eigen::Index{1} << (n_qubits - 1 - q);
    const Eigen::Index d = u.rows();
    const cplx g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        for (Eigen::Index r0 = 0; r0 < d; ++r0) {
            if (r0 & mask) continue;
            const Eigen::Index r1 = r0 | mask;
            const cplx a = u(r0, c), b = u(r1, c);
            u(r0, c) = g00 * a + g01 * b;
            u(r1, c) = g10 * a + g11 * b;
        }
    }
}

void apply_cx(ComplexMatrix& u, int control, int target, int n_qubits) {
    const Eigen::Index cmask = Eigen::Index{1} << (n_qubits - 1 - control);
    const Eigen::Index tmask = Eigen::Index{1} << (n_qubits - 1 - target);
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        if ((r & cmask) && !(r & tmask)) u.row(r).swap(u.row(r | tmask));
    }
}

}  // namespace

std::string_view gate_name(GateKind kind) {
    for (const auto& [k, name] : kGateNames) {
        if (k == kind) return name;
    }
    return "?";
}

GateKind gate_kind_from_name(std::string_view name) {
    for (const auto& [k, n] : kGateNames) {
        if (n == name) return k;
    }
    throw SchemaError("unknown gate kind \"" + std::string(name) + "\"");
}

bool is_rotation(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

ComplexMatrix single_qubit_matrix(GateKind kind, double angle) {
    using namespace std::complex_literals;
    ComplexMatrix g(2, 2);
    const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
    switch (kind) {
        case GateKind::RX:
            g << c, -1i * s, -1i * s, c;
            break;
        case GateKind::RY:
            g << c, -s, s, c;
            break;
        case GateKind::RZ:
            g << std::exp(-0.5i * angle), 0.0, 0.0, std::exp(0.5i * angle);
            break;
        case GateKind::H:
            g << 1.0, 1.0, 1.0, -1.0;
            g /= std::numbers::sqrt2;
            break;
        case GateKind::X:
            g << 0.0, 1.0, 1.0, 0.0;
            break;
        case GateKind::Y:
            g << 0.0, -1i, 1i, 0.0;
            break;
        case GateKind::Z:
            g << 1.0, 0.0, 0.0, -1.0;
            break;
        case GateKind::CX:
            throw DimensionError("CX is not a single-qubit gate");
    }
    return g;
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw DimensionError("circuit needs at least one qubit");
}

Circuit::Circuit(int n_qubits, std::vector<Gate> gates, int n_params) : Circuit(n_qubits) {
    for (auto& g : gates) append(std::move(g));
    if (n_params >= 0) {
        if (n_params < n_params_) {
            throw DimensionError("n_params=" + std::to_string(n_params) +
                                 " is smaller than the largest symbolic index + 1");
        }
        n_params_ = n_params;
    }
}

void Circuit::append(Gate gate) {
    validate_gate(gate, n_qubits_);
    if (const auto* sym = std::get_if<SymbolicParam>(&gate.param)) {
        n_params_ = std::max(n_params_, sym->index + 1);
    }
    gates_.push_back(std::move(gate));
}

Circuit Circuit::bind(std::span<const double> params) const {
    if (static_cast<int>(params.size()) != n_params_) {
        throw DimensionError("bind: expected " + std::to_string(n_params_) + " parameters, got " +
                             std::to_string(params.size()));
    }
    Circuit out(n_qubits_);
    for (Gate g : gates_) {
        if (const auto* sym = std::get_if<SymbolicParam>(&g.param)) {
            g.param = BoundAngle{params[static_cast<size_t>(sym->index)]};
        }
        out.append(std::move(g));
    }
    return out;
}

ComplexMatrix unitary_of(const Circuit& circuit, std::span<const double> params) {
    if (static_cast<int>(params.size()) != circuit.n_params()) {
        throw DimensionError("unitary_of: expected " + std::to_string(circuit.n_params()) +
                             " parameters, got " + std::to_string(params.size()));
    }
    const int n = circuit.n_qubits();
    ComplexMatrix u = identity(n);
    for (const Gate& g : circuit.gates()) {
        if (g.kind == GateKind::CX) {
            apply_cx(u, g.targets[0], g.targets[1], n);
            continue;
        }
        double angle = 0.0;
        if (const auto* b = std::get_if<BoundAngle>(&g.param)) {
            angle = b->value;
        } else if (const auto* s = std::get_if<SymbolicParam>(&g.param)) {
            angle = params[static_cast<size_t>(s->index)];
        }
        apply_single(u, single_qubit_matrix(g.kind, angle), g.targets[0], n);
    }
    return u;
}

Circuit inverse(const Circuit& circuit) {
    Circuit out(circuit.n_qubits());
    const auto& gates = circuit.gates();
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Gate g = *it;
        if (std::holds_alternative<SymbolicParam>(g.param)) {
            throw DimensionError("inverse: circuit has unbound parameters");
        }
        if (auto* b = std::get_if<BoundAngle>(&g.param)) b->value = -b->value;
        out.append(std::move(g));
    }
    return out;
}

Circuit real_amplitudes(const AnsatzSpec& spec) {
    if (spec.n_qubits < 1) throw DimensionError("real_amplitudes: n_qubits must be positive");
    if (spec.layers < 1) throw DimensionError("real_amplitudes: layers must be >= 1");
    Circuit c(spec.n_qubits);
    int next = 0;
    auto rotation_layer = [&] {
        for (int q = 0; q < spec.n_qubits; ++q) c.append(Gate::symbolic(GateKind::RY, q, next++));
    };
    rotation_layer();
    for (int layer = 0; layer < spec.layers; ++layer) {
        if (spec.entanglement == Entanglement::Linear) {
            for (int q = 0; q + 1 < spec.n_qubits; ++q) c.append(Gate::cx(q, q + 1));
        } else {
            for (int i = 0; i < spec.n_qubits; ++i) {
                for (int j = i + 1; j < spec.n_qubits; ++j) c.append(Gate::cx(i, j));
            }
        }
        rotation_layer();
    }
    return c;
}

Circuit random_circuit(int n_qubits, int depth, std::uint64_t seed) {
    if (depth < 1) throw DimensionError("random_circuit: depth must be >= 1");
    constexpr std::array<GateKind, 4> kPool{GateKind::H, GateKind::RX, GateKind::RY, GateKind::RZ};
    Rng rng(seed);
    Circuit c(n_qubits);
    std::vector<int> order(static_cast<size_t>(n_qubits));
    for (int layer = 0; layer < depth; ++layer) {
        for (int q = 0; q < n_qubits; ++q) {
            const GateKind kind = kPool[rng.index(kPool.size())];
            if (kind == GateKind::H) {
                c.append(Gate::fixed(kind, q));
            } else {
                c.append(Gate::bound(kind, q, rng.uniform(0.0, 2.0 * std::numbers::pi)));
            }
        }
        for (int q = 0; q < n_qubits; ++q) order[static_cast<size_t>(q)] = q;
        for (size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.index(i)]);
        }
        for (size_t i = 0; i + 1 < order.size(); i += 2) {
            if (rng.uniform() < 0.5) c.append(Gate::cx(order[i], order[i + 1]));
        }
    }
    return c;
}

std::vector<std::vector<double>> sample_params(int count, int length, double mu, double sigma,
                                               std::uint64_t seed) {
    if (sigma < 0.0) throw DimensionError("sample_params: sigma must be nonnegative");
    Rng rng(seed);
    std::vector<std::vector<double>> out(static_cast<size_t>(count));
    for (auto& v : out) {
        v.resize(static_cast<size_t>(length));
        for (double& x : v) x = rng.normal(mu, sigma);
    }
    return out;
}

std::string_view entanglement_name(Entanglement e) {
    return e == Entanglement::Linear ? "linear" : "full";
}

Entanglement entanglement_from_name(std::string_view name) {
    if (name == "linear") return Entanglement::Linear;
    if (name == "full") return Entanglement::Full;
    throw SchemaError("unknown entanglement \"" + std::string(name) + "\"", "entanglement");
}

nlohmann::json to_json(const Circuit& circuit) {
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate& g : circuit.gates()) {
        nlohmann::json jg{{"kind", gate_name(g.kind)}, {"targets", g.targets}};
        if (const auto* b = std::get_if<BoundAngle>(&g.param)) {
            jg["param"] = {{"bound", b->value}};
        } else if (const auto* s = std::get_if<SymbolicParam>(&g.param)) {
            jg["param"] = {{"sym", s->index}};
        }
        gates.push_back(std::move(jg));
    }
    return {{"n_qubits", circuit.n_qubits()}, {"gates", std::move(gates)}, {"n_params", circuit.n_params()}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
    require_only_keys(j, {"n_qubits", "gates", "n_params"}, "circuit");
    try {
        const int n = require_key(j, "n_qubits", "circuit").get<int>();
        std::vector<Gate> gates;
        for (const auto& jg : require_key(j, "gates", "circuit")) {
            require_only_keys(jg, {"kind", "targets", "param"}, "gate");
            Gate g;
            g.kind = gate_kind_from_name(require_key(jg, "kind", "gate").get<std::string>());
            g.targets = require_key(jg, "targets", "gate").get<std::vector<int>>();
            if (const auto it = jg.find("param"); it != jg.end() && !it->is_null()) {
                require_only_keys(*it, {"bound", "sym"}, "gate param");
                if (it->size() != 1) throw SchemaError("gate param needs exactly one of bound/sym", "param");
                if (it->contains("bound")) {
                    g.param = BoundAngle{(*it)["bound"].get<double>()};
                } else {
                    g.param = SymbolicParam{(*it)["sym"].get<int>()};
                }
            }
            gates.push_back(std::move(g));
        }
        const int n_params = j.contains("n_params") ? j["n_params"].get<int>() : -1;
        Circuit c(n, std::move(gates), n_params);
        return c;
    } catch (const DimensionError& e) {
        throw SchemaError(std::string("circuit: ") + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("circuit: ") + e.what());
    }
}

}  // namespace channelpress
