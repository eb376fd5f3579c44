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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "channelpress/circuit.hpp"
#include "channelpress/linalg.hpp"
#include "json.hpp"

namespace channelpress {

/// Convex combination sum_i p_i U_i . U_i^dagger of fully bound circuits.
class MixedUnitaryChannel {
   public:
    MixedUnitaryChannel(std::vector<Circuit> members, std::vector<double> probs);

    static MixedUnitaryChannel unitary(Circuit circuit);
    /// Uniform mixture of Pauli strings such as "IX" or "ZY"; character k
    /// acts on qubit k.
    static MixedUnitaryChannel pauli_mixture(std::span<const std::string> paulis);
    /// Uniform mixture of all 4^n Pauli strings: the completely depolarizing
    /// channel.
    static MixedUnitaryChannel depolarizing(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return members_.size(); }
    const std::vector<Circuit>& members() const { return members_; }
    const std::vector<double>& probs() const { return probs_; }
    const std::vector<ComplexMatrix>& unitaries() const { return unitaries_; }

    /// sum_i p_i U_i rho U_i^dagger.
    ComplexMatrix apply(const ComplexMatrix& rho) const;

   private:
    int n_qubits_ = 0;
    std::vector<Circuit> members_;
    std::vector<double> probs_;
    std::vector<ComplexMatrix> unitaries_;
};

/// Trace-one Choi state (id kron E)(phi+) of a channel.
///
/// Qubit layout is fixed: reference (input copy) qubits 0..n_in-1 followed
/// by output qubits n_in..n_in+n_out-1.
class ChoiMatrix {
   public:
    /// Validates the density-matrix and trace-preservation invariants. A TP
    /// residual above 1e-6 throws NumericalError; above 1e-8 sets
    /// tp_warning().
    ChoiMatrix(int n_in, int n_out, ComplexMatrix mat);

    /// Skips the eigenvalue-based PSD check for matrices that are PSD by
    /// construction. Trace, hermiticity and TP are still checked.
    static ChoiMatrix trusted(int n_in, int n_out, ComplexMatrix mat);

    int n_in() const { return n_in_; }
    int n_out() const { return n_out_; }
    int n_total() const { return n_in_ + n_out_; }
    const ComplexMatrix& mat() const { return mat_; }
    double tp_residual() const { return tp_residual_; }
    bool tp_warning() const { return tp_residual_ > 1e-8; }

   private:
    ChoiMatrix() = default;
    void check_invariants(bool check_psd);

    int n_in_ = 0;
    int n_out_ = 0;
    ComplexMatrix mat_;
    double tp_residual_ = 0.0;
};

/// max-entry deviation of tr_out(mat) from I / 2^n_in.
double tp_residual(const ComplexMatrix& mat, int n_in, int n_out);

/// psi with psi(j * d + k) = U(k, j) / sqrt(d), so that the Choi state of
/// U . U^dagger is psi psi^dagger.
ComplexVector choi_vector_of_unitary(const ComplexMatrix& u);

ChoiMatrix identity_choi(int n_qubits);
ChoiMatrix choi_of_unitary(const ComplexMatrix& u);
ChoiMatrix choi_of_mixed(const MixedUnitaryChannel& e);

/// Columns sqrt(p_i) psi_i, a factor F with J = F F^dagger.
ComplexMatrix choi_factor_of_mixed(const MixedUnitaryChannel& e);

/// E(rho) = d_in tr_in(J (rho^T kron I)).
ComplexMatrix apply_choi(const ChoiMatrix& j, const ComplexMatrix& rho);

/// Choi of v_post o E o u_pre: (u_pre^T kron v_post) J (u_pre^T kron v_post)^dagger.
ChoiMatrix conjugate_choi(const ChoiMatrix& j, const std::optional<ComplexMatrix>& u_pre,
                          const std::optional<ComplexMatrix>& v_post);

/// Choi of E1 kron E2 in the canonical [refs1, refs2, outs1, outs2] layout.
ChoiMatrix tensor_choi(const ChoiMatrix& j1, const ChoiMatrix& j2);

/// Keeps the listed input (reference) and output qubits, tracing out the rest.
ChoiMatrix reduced_choi(const ChoiMatrix& j, std::span<const int> keep_in, std::span<const int> keep_out);

double channel_fidelity(const ChoiMatrix& j1, const ChoiMatrix& j2);

double top_k_eigenvalue_sum(const ChoiMatrix& j, int k);

nlohmann::json to_json(const MixedUnitaryChannel& e);
MixedUnitaryChannel channel_from_json(const nlohmann::json& j);
/// {n_in, n_out, re: [[...]], im: [[...]]}, row-major.
nlohmann::json to_json(const ChoiMatrix& j);
ChoiMatrix choi_from_json(const nlohmann::json& j);

}  // namespace channelpress
