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

#include "channelpress/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace channelpress {

namespace {

constexpr double kClampNegative = -1e-9;
constexpr double kSeverelyNegative = -1e-6;

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(what) + ": matrix is not square");
    }
}

void require_dim(const ComplexMatrix& m, int n_qubits, const char* what) {
    require_square(m, what);
    if (n_qubits < 0 || n_qubits > 30 || m.rows() != (Eigen::Index{1} << n_qubits)) {
        throw DimensionError(std::string(what) + ": matrix dimension " + std::to_string(m.rows()) +
                             " does not match " + std::to_string(n_qubits) + " qubits");
    }
}

// Bit position (counted from the least significant end) of qubit q.
inline int bit_of(int q, int n_qubits) { return n_qubits - 1 - q; }

}  // namespace

int qubit_count(Eigen::Index dim) {
    if (dim <= 0 || (dim & (dim - 1)) != 0) {
        throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
    }
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    return n;
}

ComplexMatrix identity(int n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    return ComplexMatrix::Identity(d, d);
}

ComplexMatrix maximally_mixed(int n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    return ComplexMatrix::Identity(d, d) / static_cast<double>(d);
}

ComplexMatrix phi_plus(int n_pairs) {
    const Eigen::Index d = Eigen::Index{1} << n_pairs;
    ComplexVector psi = ComplexVector::Zero(d * d);
    for (Eigen::Index j = 0; j < d; ++j) psi(j * d + j) = 1.0;
    psi /= std::sqrt(static_cast<double>(d));
    return psi * psi.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int n_qubits, std::span<const int> keep) {
    require_dim(m, n_qubits, "partial_trace");
    std::vector<bool> kept(static_cast<size_t>(n_qubits), false);
    for (int q : keep) {
        if (q < 0 || q >= n_qubits) {
            throw DimensionError("partial_trace: keep index " + std::to_string(q) + " out of range");
        }
        if (kept[static_cast<size_t>(q)]) {
            throw DimensionError("partial_trace: duplicate keep index " + std::to_string(q));
        }
        kept[static_cast<size_t>(q)] = true;
    }
    std::vector<int> keep_bits, trace_bits;
    for (int q = 0; q < n_qubits; ++q) {
        (kept[static_cast<size_t>(q)] ? keep_bits : trace_bits).push_back(bit_of(q, n_qubits));
    }
    // Maps a compact index over the kept (traced) qubits onto full-index bits.
    auto spread = [](const std::vector<int>& bits) {
        const size_t count = size_t{1} << bits.size();
        std::vector<Eigen::Index> table(count);
        for (size_t k = 0; k < count; ++k) {
            Eigen::Index full = 0;
            for (size_t b = 0; b < bits.size(); ++b) {
                if ((k >> (bits.size() - 1 - b)) & 1u) full |= Eigen::Index{1} << bits[b];
            }
            table[k] = full;
        }
        return table;
    };
    const auto keep_map = spread(keep_bits);
    const auto trace_map = spread(trace_bits);

    const auto dk = static_cast<Eigen::Index>(keep_map.size());
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (Eigen::Index j = 0; j < dk; ++j) {
        for (Eigen::Index i = 0; i < dk; ++i) {
            cplx acc = 0.0;
            for (Eigen::Index t : trace_map) acc += m(keep_map[i] | t, keep_map[j] | t);
            out(i, j) = acc;
        }
    }
    return out;
}

std::vector<int> invert_permutation(std::span<const int> perm) {
    std::vector<int> inv(perm.size(), -1);
    for (size_t i = 0; i < perm.size(); ++i) {
        const int p = perm[i];
        if (p < 0 || static_cast<size_t>(p) >= perm.size() || inv[static_cast<size_t>(p)] != -1) {
            throw DimensionError("permutation is not a bijection");
        }
        inv[static_cast<size_t>(p)] = static_cast<int>(i);
    }
    return inv;
}

ComplexMatrix permute_qubits(const ComplexMatrix& m, int n_qubits, std::span<const int> perm) {
    require_dim(m, n_qubits, "permute_qubits");
    if (static_cast<int>(perm.size()) != n_qubits) {
        throw DimensionError("permute_qubits: permutation length does not match qubit count");
    }
    invert_permutation(perm);  // validates bijectivity

    const Eigen::Index d = m.rows();
    std::vector<Eigen::Index> relabel(static_cast<size_t>(d));
    for (Eigen::Index x = 0; x < d; ++x) {
        Eigen::Index y = 0;
        for (int q = 0; q < n_qubits; ++q) {
            if ((x >> bit_of(q, n_qubits)) & 1) y |= Eigen::Index{1} << bit_of(perm[q], n_qubits);
        }
        relabel[static_cast<size_t>(x)] = y;
    }
    ComplexMatrix out(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) out(relabel[r], relabel[c]) = m(r, c);
    }
    return out;
}

HermitianEigen hermitian_eig(const ComplexMatrix& m) {
    require_square(m, "hermitian_eig");
    const ComplexMatrix sym = (m + m.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eig: eigensolver did not converge");
    }
    // Eigen returns ascending order.
    HermitianEigen out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    const auto eig = hermitian_eig(m);
    const Eigen::Index d = eig.values.size();
    if (d > 0 && eig.values(d - 1) < kSeverelyNegative) {
        throw NumericalError("psd_sqrt: eigenvalue " + std::to_string(eig.values(d - 1)) +
                             " is significantly negative");
    }
    const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
    return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

double fidelity_factored(const ComplexMatrix& factor, const ComplexMatrix& sigma) {
    if (factor.rows() != sigma.rows() || sigma.rows() != sigma.cols()) {
        throw DimensionError("fidelity: dimension mismatch");
    }
    // sqrt(rho) sigma sqrt(rho) shares its nonzero spectrum with
    // factor^dagger sigma factor.
    const ComplexMatrix inner = factor.adjoint() * sigma * factor;
    double root_sum = 0.0;
    if (inner.rows() == 1) {
        root_sum = std::sqrt(std::max(inner(0, 0).real(), 0.0));
    } else {
        const auto eig = hermitian_eig(inner);
        // Rounding leaves ~1e-17 eigenvalues on null directions; their square
        // roots would add ~1e-9 to the sum.
        const double cutoff = std::max(eig.values(0), 0.0) * 1e-13;
        for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
            if (eig.values(k) > cutoff) root_sum += std::sqrt(eig.values(k));
        }
    }
    return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    require_square(rho, "fidelity");
    require_square(sigma, "fidelity");
    if (rho.rows() != sigma.rows()) throw DimensionError("fidelity: dimension mismatch");

    // Factor the argument of lower numerical rank; the other enters whole.
    auto factor_of = [](const HermitianEigen& eig) {
        const double cutoff = std::max(0.0, eig.values(0)) * 1e-15;
        Eigen::Index rank = 0;
        while (rank < eig.values.size() && eig.values(rank) > cutoff) ++rank;
        ComplexMatrix factor = eig.vectors.leftCols(rank);
        for (Eigen::Index k = 0; k < rank; ++k) factor.col(k) *= std::sqrt(eig.values(k));
        return factor;
    };
    const ComplexMatrix a = factor_of(hermitian_eig(rho));
    const ComplexMatrix b = factor_of(hermitian_eig(sigma));
    if (a.cols() == 0 || b.cols() == 0) return 0.0;
    return a.cols() <= b.cols() ? fidelity_factored(a, sigma) : fidelity_factored(b, rho);
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("trace_distance: dimension mismatch");
    }
    const auto eig = hermitian_eig(a - b);
    return 0.5 * eig.values.cwiseAbs().sum();
}

double top_k_eigenvalue_sum(const ComplexMatrix& m, int k) {
    require_square(m, "top_k_eigenvalue_sum");
    if (k < 1 || k > m.rows()) {
        throw DimensionError("top_k_eigenvalue_sum: k=" + std::to_string(k) + " out of range");
    }
    return hermitian_eig(m).values.head(k).sum();
}

double max_abs_entry(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& m) {
    require_square(m, "hermiticity_residual");
    return max_abs_entry(m - m.adjoint());
}

double unitarity_residual(const ComplexMatrix& u) {
    require_square(u, "unitarity_residual");
    return max_abs_entry(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

bool is_density_matrix(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    if (hermiticity_residual(m) > 1e-10) return false;
    if (std::abs(m.trace() - cplx{1.0, 0.0}) > 1e-9) return false;
    const auto eig = hermitian_eig(m);
    return eig.values(eig.values.size() - 1) >= kClampNegative;
}

ComplexMatrix apply_kron_left(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& x) {
    require_square(a, "apply_kron_left");
    require_square(b, "apply_kron_left");
    const Eigen::Index da = a.rows(), db = b.rows();
    if (x.rows() != da * db) throw DimensionError("apply_kron_left: dimension mismatch");
    ComplexMatrix out(x.rows(), x.cols());
    const ComplexMatrix bt = b;
    const ComplexMatrix at = a.transpose();
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        // Column c viewed as a column-major db x da block is Y^T, where
        // Y(i, j) = x(i * db + j, c); the product (a kron b) x maps Y to a Y b^T.
        Eigen::Map<const ComplexMatrix> yt(x.col(c).data(), db, da);
        Eigen::Map<ComplexMatrix> zt(out.col(c).data(), db, da);
        zt.noalias() = bt * yt * at;
    }
    return out;
}

ComplexMatrix conjugate_by_kron(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& m) {
    const ComplexMatrix left = apply_kron_left(a, b, m);
    return apply_kron_left(a, b, left.adjoint()).adjoint();
}

}  // namespace channelpress
