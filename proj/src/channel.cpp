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

#include "channelpress/channel.hpp"

#include <cmath>
#include <numeric>

#include "channelpress/json_util.hpp"

namespace channelpress {

namespace {

constexpr double kTpError = 1e-6;
constexpr double kHermitianTol = 1e-10;
constexpr double kTraceTol = 1e-9;

std::vector<int> iota_vec(int start, int count) {
    std::vector<int> v(static_cast<size_t>(count));
    std::iota(v.begin(), v.end(), start);
    return v;
}

}  // namespace

MixedUnitaryChannel::MixedUnitaryChannel(std::vector<Circuit> members, std::vector<double> probs)
    : members_(std::move(members)), probs_(std::move(probs)) {
    if (members_.empty()) throw DimensionError("mixed-unitary channel needs at least one member");
    if (members_.size() != probs_.size()) {
        throw DimensionError("mixed-unitary channel: members and probs differ in length");
    }
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw DimensionError("mixed-unitary channel: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw DimensionError("mixed-unitary channel: probabilities sum to " + std::to_string(total));
    }
    n_qubits_ = members_.front().n_qubits();
    unitaries_.reserve(members_.size());
    for (const Circuit& c : members_) {
        if (c.n_qubits() != n_qubits_) {
            throw DimensionError("mixed-unitary channel: members act on different qubit counts");
        }
        if (c.n_params() != 0) {
            throw DimensionError("mixed-unitary channel: members must be fully bound circuits");
        }
        unitaries_.push_back(unitary_of(c));
    }
}

MixedUnitaryChannel MixedUnitaryChannel::unitary(Circuit circuit) {
    return MixedUnitaryChannel({std::move(circuit)}, {1.0});
}

MixedUnitaryChannel MixedUnitaryChannel::pauli_mixture(std::span<const std::string> paulis) {
    if (paulis.empty()) throw DimensionError("pauli_mixture: empty Pauli list");
    const int n = static_cast<int>(paulis.front().size());
    std::vector<Circuit> members;
    for (const std::string& p : paulis) {
        if (static_cast<int>(p.size()) != n) throw DimensionError("pauli_mixture: strings differ in length");
        Circuit c(n);
        for (int q = 0; q < n; ++q) {
            switch (p[static_cast<size_t>(q)]) {
                case 'I':
                    break;
                case 'X':
                    c.append(Gate::fixed(GateKind::X, q));
                    break;
                case 'Y':
                    c.append(Gate::fixed(GateKind::Y, q));
                    break;
                case 'Z':
                    c.append(Gate::fixed(GateKind::Z, q));
                    break;
                default:
                    throw DimensionError("pauli_mixture: invalid Pauli string \"" + p + "\"");
            }
        }
        members.push_back(std::move(c));
    }
    std::vector<double> probs(members.size(), 1.0 / static_cast<double>(members.size()));
    return MixedUnitaryChannel(std::move(members), std::move(probs));
}

MixedUnitaryChannel MixedUnitaryChannel::depolarizing(int n_qubits) {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    std::vector<std::string> paulis;
    const size_t count = size_t{1} << (2 * n_qubits);
    for (size_t k = 0; k < count; ++k) {
        std::string s(static_cast<size_t>(n_qubits), 'I');
        for (int q = 0; q < n_qubits; ++q) {
            s[static_cast<size_t>(q)] = kLetters[(k >> (2 * (n_qubits - 1 - q))) & 3u];
        }
        paulis.push_back(std::move(s));
    }
    return pauli_mixture(paulis);
}

ComplexMatrix MixedUnitaryChannel::apply(const ComplexMatrix& rho) const {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (size_t i = 0; i < unitaries_.size(); ++i) {
        out += probs_[i] * unitaries_[i] * rho * unitaries_[i].adjoint();
    }
    return out;
}

double tp_residual(const ComplexMatrix& mat, int n_in, int n_out) {
    const auto keep = iota_vec(0, n_in);
    const ComplexMatrix marginal = partial_trace(mat, n_in + n_out, keep);
    return max_abs_entry(marginal - maximally_mixed(n_in));
}

ChoiMatrix::ChoiMatrix(int n_in, int n_out, ComplexMatrix mat) : n_in_(n_in), n_out_(n_out), mat_(std::move(mat)) {
    check_invariants(true);
}

ChoiMatrix ChoiMatrix::trusted(int n_in, int n_out, ComplexMatrix mat) {
    ChoiMatrix j;
    j.n_in_ = n_in;
    j.n_out_ = n_out;
    j.mat_ = std::move(mat);
    j.check_invariants(false);
    return j;
}

void ChoiMatrix::check_invariants(bool check_psd) {
    if (n_in_ < 0 || n_out_ < 0 || n_in_ + n_out_ < 1) throw DimensionError("Choi matrix: invalid qubit counts");
    const Eigen::Index d = Eigen::Index{1} << (n_in_ + n_out_);
    if (mat_.rows() != d || mat_.cols() != d) {
        throw DimensionError("Choi matrix: dimension " + std::to_string(mat_.rows()) + " does not match n_in=" +
                             std::to_string(n_in_) + ", n_out=" + std::to_string(n_out_));
    }
    if (hermiticity_residual(mat_) > kHermitianTol) throw NumericalError("Choi matrix is not Hermitian");
    if (std::abs(mat_.trace() - cplx{1.0, 0.0}) > kTraceTol) {
        throw NumericalError("Choi matrix trace is " + std::to_string(mat_.trace().real()));
    }
    if (check_psd && !is_density_matrix(mat_)) throw NumericalError("Choi matrix is not positive semidefinite");
    tp_residual_ = channelpress::tp_residual(mat_, n_in_, n_out_);
    if (tp_residual_ > kTpError) {
        throw NumericalError("Choi matrix is not trace preserving (residual " + std::to_string(tp_residual_) + ")");
    }
}

ComplexVector choi_vector_of_unitary(const ComplexMatrix& u) {
    const Eigen::Index d = u.rows();
    ComplexVector psi(d * d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) psi(j * d + k) = u(k, j) * scale;
    }
    return psi;
}

ChoiMatrix identity_choi(int n_qubits) { return ChoiMatrix::trusted(n_qubits, n_qubits, phi_plus(n_qubits)); }

ChoiMatrix choi_of_unitary(const ComplexMatrix& u) {
    const int n = qubit_count(u.rows());
    if (u.cols() != u.rows()) throw DimensionError("choi_of_unitary: matrix is not square");
    const double residual = unitarity_residual(u);
    if (residual > 1e-8) {
        throw NumericalError("choi_of_unitary: input is not unitary (residual " + std::to_string(residual) + ")");
    }
    const ComplexVector psi = choi_vector_of_unitary(u);
    return ChoiMatrix::trusted(n, n, psi * psi.adjoint());
}

ComplexMatrix choi_factor_of_mixed(const MixedUnitaryChannel& e) {
    const Eigen::Index d = Eigen::Index{1} << e.n_qubits();
    ComplexMatrix factor(d * d, static_cast<Eigen::Index>(e.size()));
    for (size_t i = 0; i < e.size(); ++i) {
        factor.col(static_cast<Eigen::Index>(i)) = std::sqrt(e.probs()[i]) * choi_vector_of_unitary(e.unitaries()[i]);
    }
    return factor;
}

ChoiMatrix choi_of_mixed(const MixedUnitaryChannel& e) {
    const ComplexMatrix factor = choi_factor_of_mixed(e);
    return ChoiMatrix::trusted(e.n_qubits(), e.n_qubits(), factor * factor.adjoint());
}

ComplexMatrix apply_choi(const ChoiMatrix& j, const ComplexMatrix& rho) {
    const Eigen::Index din = Eigen::Index{1} << j.n_in();
    const Eigen::Index dout = Eigen::Index{1} << j.n_out();
    if (rho.rows() != din || rho.cols() != din) throw DimensionError("apply_choi: input dimension mismatch");
    const ComplexMatrix& m = j.mat();
    ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
    for (Eigen::Index a = 0; a < din; ++a) {
        for (Eigen::Index b = 0; b < din; ++b) {
            const cplx w = rho(a, b);
            if (w == cplx{0.0, 0.0}) continue;
            out += w * m.block(a * dout, b * dout, dout, dout);
        }
    }
    return out * static_cast<double>(din);
}

ChoiMatrix conjugate_choi(const ChoiMatrix& j, const std::optional<ComplexMatrix>& u_pre,
                          const std::optional<ComplexMatrix>& v_post) {
    const Eigen::Index din = Eigen::Index{1} << j.n_in();
    const Eigen::Index dout = Eigen::Index{1} << j.n_out();
    if (u_pre && (u_pre->rows() != din || u_pre->cols() != din)) {
        throw DimensionError("conjugate_choi: pre-unitary does not match the input dimension");
    }
    if (v_post && (v_post->rows() != dout || v_post->cols() != dout)) {
        throw DimensionError("conjugate_choi: post-unitary does not match the output dimension");
    }
    const ComplexMatrix left = u_pre ? ComplexMatrix(u_pre->transpose()) : ComplexMatrix::Identity(din, din);
    const ComplexMatrix right = v_post ? *v_post : ComplexMatrix::Identity(dout, dout);
    ComplexMatrix out = conjugate_by_kron(left, right, j.mat());
    out = (out + out.adjoint()) * 0.5;
    return ChoiMatrix::trusted(j.n_in(), j.n_out(), std::move(out));
}

ChoiMatrix tensor_choi(const ChoiMatrix& j1, const ChoiMatrix& j2) {
    const int a = j1.n_in(), b = j1.n_out(), c = j2.n_in(), d = j2.n_out();
    // kron layout is [refs1, outs1, refs2, outs2]
    std::vector<int> perm(static_cast<size_t>(a + b + c + d));
    for (int q = 0; q < a; ++q) perm[static_cast<size_t>(q)] = q;
    for (int q = 0; q < b; ++q) perm[static_cast<size_t>(a + q)] = a + c + q;
    for (int q = 0; q < c; ++q) perm[static_cast<size_t>(a + b + q)] = a + q;
    for (int q = 0; q < d; ++q) perm[static_cast<size_t>(a + b + c + q)] = a + c + b + q;
    ComplexMatrix product = kron(j1.mat(), j2.mat());
    return ChoiMatrix::trusted(a + c, b + d, permute_qubits(product, a + b + c + d, perm));
}

ChoiMatrix reduced_choi(const ChoiMatrix& j, std::span<const int> keep_in, std::span<const int> keep_out) {
    std::vector<int> keep;
    for (int q : keep_in) {
        if (q < 0 || q >= j.n_in()) throw DimensionError("reduced_choi: input index out of range");
        keep.push_back(q);
    }
    for (int q : keep_out) {
        if (q < 0 || q >= j.n_out()) throw DimensionError("reduced_choi: output index out of range");
        keep.push_back(j.n_in() + q);
    }
    // partial_trace orders the result by ascending qubit index
    std::sort(keep.begin(), keep.end());
    ComplexMatrix reduced = partial_trace(j.mat(), j.n_total(), keep);
    return ChoiMatrix::trusted(static_cast<int>(keep_in.size()), static_cast<int>(keep_out.size()),
                               std::move(reduced));
}

double channel_fidelity(const ChoiMatrix& j1, const ChoiMatrix& j2) {
    if (j1.n_in() != j2.n_in() || j1.n_out() != j2.n_out()) {
        throw DimensionError("channel_fidelity: channels have different shapes");
    }
    return fidelity(j1.mat(), j2.mat());
}

double top_k_eigenvalue_sum(const ChoiMatrix& j, int k) { return top_k_eigenvalue_sum(j.mat(), k); }

nlohmann::json to_json(const MixedUnitaryChannel& e) {
    nlohmann::json members = nlohmann::json::array();
    for (const Circuit& c : e.members()) members.push_back(to_json(c));
    return {{"members", std::move(members)}, {"probs", e.probs()}};
}

MixedUnitaryChannel channel_from_json(const nlohmann::json& j) {
    require_only_keys(j, {"members", "probs"}, "channel");
    std::vector<Circuit> members;
    for (const auto& jc : require_key(j, "members", "channel")) members.push_back(circuit_from_json(jc));
    try {
        auto probs = require_key(j, "probs", "channel").get<std::vector<double>>();
        return MixedUnitaryChannel(std::move(members), std::move(probs));
    } catch (const DimensionError& e) {
        throw SchemaError(e.what(), "probs");
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("channel: ") + e.what(), "probs");
    }
}

nlohmann::json to_json(const ChoiMatrix& j) {
    const auto& m = j.mat();
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::vector<double> row_re(static_cast<size_t>(m.cols())), row_im(static_cast<size_t>(m.cols()));
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row_re[static_cast<size_t>(c)] = m(r, c).real();
            row_im[static_cast<size_t>(c)] = m(r, c).imag();
        }
        re.push_back(std::move(row_re));
        im.push_back(std::move(row_im));
    }
    return {{"n_in", j.n_in()}, {"n_out", j.n_out()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ChoiMatrix choi_from_json(const nlohmann::json& j) {
    require_only_keys(j, {"n_in", "n_out", "re", "im"}, "choi");
    try {
        const int n_in = require_key(j, "n_in", "choi").get<int>();
        const int n_out = require_key(j, "n_out", "choi").get<int>();
        const auto re = require_key(j, "re", "choi").get<std::vector<std::vector<double>>>();
        const auto im = require_key(j, "im", "choi").get<std::vector<std::vector<double>>>();
        const auto d = static_cast<Eigen::Index>(re.size());
        if (static_cast<Eigen::Index>(im.size()) != d) throw SchemaError("choi: re/im row counts differ");
        ComplexMatrix m(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            if (static_cast<Eigen::Index>(re[static_cast<size_t>(r)].size()) != d ||
                static_cast<Eigen::Index>(im[static_cast<size_t>(r)].size()) != d) {
                throw SchemaError("choi: matrix is not square");
            }
            for (Eigen::Index c = 0; c < d; ++c) {
                m(r, c) = {re[static_cast<size_t>(r)][static_cast<size_t>(c)],
                           im[static_cast<size_t>(r)][static_cast<size_t>(c)]};
            }
        }
        return ChoiMatrix(n_in, n_out, std::move(m));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("choi: ") + e.what());
    }
}

}  // namespace channelpress
