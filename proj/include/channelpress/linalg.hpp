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

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace channelpress {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thrown when an operation receives structurally invalid input (bad
/// dimensions, out-of-range indices, malformed permutations).
class DimensionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical invariant is violated beyond tolerance (a state
/// that should be PSD is not, a channel stops being trace preserving, ...).
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Eigendecomposition of a Hermitian matrix. `values` are sorted in
/// descending order and column k of `vectors` belongs to values[k].
struct HermitianEigen {
    RealVector values;
    ComplexMatrix vectors;
};

// Qubit indexing is big-endian throughout: qubit 0 is the most significant
// bit of a row/column index.

/// Number of qubits n with 2^n == dim. Throws DimensionError otherwise.
int qubit_count(Eigen::Index dim);

ComplexMatrix identity(int n_qubits);
/// I / 2^n.
ComplexMatrix maximally_mixed(int n_qubits);
/// Maximally entangled state on 2*n_pairs qubits, qubit k paired with
/// qubit k + n_pairs.
ComplexMatrix phi_plus(int n_pairs);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out every qubit not in `keep`. The result is ordered by the
/// ascending order of the kept indices.
ComplexMatrix partial_trace(const ComplexMatrix& m, int n_qubits, std::span<const int> keep);

/// Relabels qubits so that qubit i of the input sits at position perm[i]
/// of the output, i.e. conjugation by the matching permutation unitary.
ComplexMatrix permute_qubits(const ComplexMatrix& m, int n_qubits, std::span<const int> perm);

/// Inverse of a qubit permutation.
std::vector<int> invert_permutation(std::span<const int> perm);

/// Symmetrizes (M + M^dagger)/2 before solving.
HermitianEigen hermitian_eig(const ComplexMatrix& m);

/// Principal square root of a PSD matrix. Eigenvalues down to -1e-6 are
/// clamped to zero; anything more negative throws NumericalError.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Fidelity between rho = factor * factor^dagger and sigma. Cost is
/// dominated by sigma * factor, so a thin factor (low-rank rho) is cheap.
double fidelity_factored(const ComplexMatrix& factor, const ComplexMatrix& sigma);

/// Half the trace norm of (a - b).
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Sum of the k largest eigenvalues of a Hermitian matrix.
double top_k_eigenvalue_sum(const ComplexMatrix& m, int k);

double max_abs_entry(const ComplexMatrix& m);
/// max |M - M^dagger| entry.
double hermiticity_residual(const ComplexMatrix& m);
/// max |U^dagger U - I| entry.
double unitarity_residual(const ComplexMatrix& u);

/// Hermitian within 1e-10, unit trace within 1e-9, min eigenvalue >= -1e-9.
bool is_density_matrix(const ComplexMatrix& m);

/// Applies (a kron b) from the left to every column of x without forming
/// the Kronecker product.
ComplexMatrix apply_kron_left(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& x);

/// (a kron b) m (a kron b)^dagger.
ComplexMatrix conjugate_by_kron(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& m);

}  // namespace channelpress
