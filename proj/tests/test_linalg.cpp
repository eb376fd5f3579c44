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

#include <algorithm>
#include <numeric>

#include "channelpress/linalg.hpp"
#include "channelpress/property_suite.hpp"
#include "test_support.hpp"

using namespace channelpress;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
    const auto d = static_cast<Eigen::Index>(values.size());
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    Eigen::Index i = 0;
    for (double v : values) m(i, i) = v, ++i;
    return m;
}

}  // namespace

TEST(Kron, IdentityAndProjectors) {
    EXPECT_LT(max_abs_entry(kron(identity(1), identity(1)) - identity(2)), 1e-15);
    EXPECT_LT(max_abs_entry(kron(diag({1, 0}), diag({0, 1})) - diag({0, 1, 0, 0})), 1e-15);
}

TEST(Kron, XXFlipsBothQubits) {
    const ComplexMatrix xx = kron(oracle::pauli('X'), oracle::pauli('X'));
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(4);
    ket(0) = 1.0;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(r) += xx(r, c) * ket(c);
    EXPECT_NEAR(std::abs(out(3)), 1.0, 1e-15);
    EXPECT_NEAR(out.norm(), 1.0, 1e-15);
}

TEST(Kron, MatchesIndexLoopOracle) {
    Rng rng(3);
    const ComplexMatrix a = random_density(2, 4, rng), b = random_unitary(1, rng);
    EXPECT_LT(max_abs_entry(kron(a, b) - oracle::kron(a, b)), 1e-15);
}

TEST(PartialTrace, ProductStateAndBellMarginal) {
    Rng rng(5);
    const ComplexMatrix rho = random_density(1, 2, rng), sigma = random_density(2, 3, rng);
    const int first[] = {0};
    EXPECT_LT(max_abs_entry(partial_trace(kron(rho, sigma), 3, first) - rho), 1e-14);
    EXPECT_LT(max_abs_entry(partial_trace(phi_plus(1), 2, first) - maximally_mixed(1)), 1e-15);
}

TEST(PartialTrace, MatchesQuadrupleLoopOracle) {
    Rng rng(7);
    const ComplexMatrix m = random_density(3, 8, rng);
    const int keep[] = {0, 2};
    EXPECT_LT(max_abs_entry(partial_trace(m, 3, keep) - oracle::partial_trace(m, 3, {0, 2})), 1e-12);
    const int keep_one[] = {1};
    EXPECT_LT(max_abs_entry(partial_trace(m, 3, keep_one) - oracle::partial_trace(m, 3, {1})), 1e-12);
}

TEST(PartialTrace, KeepAllIsIdentityAndTraceIsPreserved) {
    Rng rng(9);
    const ComplexMatrix m = random_density(3, 5, rng);
    const int all[] = {0, 1, 2};
    EXPECT_LT(max_abs_entry(partial_trace(m, 3, all) - m), 1e-15);
    const int some[] = {1};
    EXPECT_NEAR(partial_trace(m, 3, some).trace().real(), 1.0, 1e-12);
}

TEST(PartialTrace, ResultFollowsAscendingKeptOrder) {
    // |0><0| on qubit 0 and |1><1| on qubit 2: keep {2, 0} still returns qubit 0 first.
    const ComplexMatrix m = kron(kron(diag({1, 0}), maximally_mixed(1)), diag({0, 1}));
    const int keep[] = {2, 0};
    EXPECT_LT(max_abs_entry(partial_trace(m, 3, keep) - diag({0, 1, 0, 0})), 1e-15);
}

TEST(PartialTrace, RejectsBadInput) {
    const ComplexMatrix m = maximally_mixed(2);
    const int out_of_range[] = {2};
    EXPECT_THROW(partial_trace(m, 2, out_of_range), DimensionError);
    const int dup[] = {0, 0};
    EXPECT_THROW(partial_trace(m, 2, dup), DimensionError);
    EXPECT_THROW(partial_trace(m, 3, out_of_range), DimensionError);
}

TEST(PermuteQubits, IdentitySwapAndOracle) {
    Rng rng(11);
    const ComplexMatrix m = random_density(3, 8, rng);
    const int ident[] = {0, 1, 2};
    EXPECT_LT(max_abs_entry(permute_qubits(m, 3, ident) - m), 1e-15);

    const int swap[] = {1, 0};
    EXPECT_LT(max_abs_entry(permute_qubits(oracle::basis_projector(4, 1), 2, swap) - oracle::basis_projector(4, 2)),
              1e-15);

    const std::vector<int> perm = {2, 0, 1};
    const ComplexMatrix p = oracle::permutation_matrix(3, perm);
    EXPECT_LT(max_abs_entry(permute_qubits(m, 3, perm) - p * m * p.adjoint()), 1e-14);
    const auto inv = invert_permutation(perm);
    EXPECT_LT(max_abs_entry(permute_qubits(permute_qubits(m, 3, perm), 3, inv) - m), 1e-15);
}

TEST(PermuteQubits, RejectsNonBijection) {
    const int bad[] = {0, 0};
    EXPECT_THROW(permute_qubits(maximally_mixed(2), 2, bad), DimensionError);
}

TEST(HermitianEig, DiagonalAndMaximallyMixed) {
    const auto e = hermitian_eig(diag({0.1, 0.9}));
    EXPECT_NEAR(e.values(0), 0.9, 1e-15);
    EXPECT_NEAR(e.values(1), 0.1, 1e-15);
    const auto w = hermitian_eig(maximally_mixed(2));
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(w.values(k), 0.25, 1e-15);
}

TEST(HermitianEig, TraceMomentsReconstructionAndOrthonormality) {
    Rng rng(13);
    ComplexMatrix g = random_unitary(3, rng) * diag({3, -1, 0.5, 2, -2, 0, 1, 0.25}) * random_unitary(3, rng).adjoint();
    const ComplexMatrix h = 0.5 * (g + g.adjoint());
    const auto e = hermitian_eig(h);
    EXPECT_NEAR(e.values.sum(), h.trace().real(), 1e-9);
    EXPECT_NEAR(e.values.squaredNorm(), (h * h).trace().real(), 1e-9);
    EXPECT_TRUE(std::is_sorted(e.values.data(), e.values.data() + e.values.size(), std::greater<>()));
    const ComplexMatrix rebuilt = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT(max_abs_entry(rebuilt - h), 1e-9);
    EXPECT_LT(max_abs_entry(e.vectors.adjoint() * e.vectors - identity(3)), 1e-9);
}

TEST(PsdSqrt, Examples) {
    EXPECT_LT(max_abs_entry(psd_sqrt(identity(2)) - identity(2)), 1e-15);
    const ComplexMatrix m = diag({4.0 / 13, 9.0 / 13});
    EXPECT_LT(max_abs_entry(psd_sqrt(m) - diag({2 / std::sqrt(13.0), 3 / std::sqrt(13.0)})), 1e-15);
    Rng rng(17);
    const ComplexMatrix r = random_density(3, 4, rng);
    const ComplexMatrix s = psd_sqrt(r);
    EXPECT_LT(max_abs_entry(s * s - r), 1e-8);
    EXPECT_GE(hermitian_eig(s).values.minCoeff(), -1e-9);
}

TEST(PsdSqrt, RejectsClearlyNegativeInput) { EXPECT_THROW(psd_sqrt(diag({1.0, -0.01})), NumericalError); }

TEST(Fidelity, Examples) {
    Rng rng(19);
    const ComplexMatrix rho = random_density(2, 3, rng);
    EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(diag({1, 0}), diag({0, 1})), 0.0, 1e-15);
    EXPECT_NEAR(fidelity(phi_plus(1), maximally_mixed(2)), 0.25, 1e-12);
    EXPECT_THROW(fidelity(maximally_mixed(1), maximally_mixed(2)), DimensionError);
}

TEST(Fidelity, CommutingSpectraOracle) {
    // Diagonal states: F = (sum sqrt(p_i q_i))^2.
    const ComplexMatrix p = diag({0.5, 0.25, 0.125, 0.125}), q = diag({0.1, 0.2, 0.3, 0.4});
    const double expected = std::pow(std::sqrt(0.05) + std::sqrt(0.05) + std::sqrt(0.0375) + std::sqrt(0.05), 2);
    EXPECT_NEAR(fidelity(p, q), expected, 1e-12);
}

TEST(Fidelity, FactoredAgreesWithDirect) {
    Rng rng(23);
    for (int c = 0; c < 10; ++c) {
        const ComplexMatrix sigma = random_density(3, 1 + c % 8, rng);
        const ComplexMatrix g = random_density(3, 2, rng);
        const auto e = hermitian_eig(g);
        ComplexMatrix factor = e.vectors.leftCols(2);
        for (int k = 0; k < 2; ++k) factor.col(k) *= std::sqrt(std::max(0.0, e.values(k)));
        EXPECT_NEAR(fidelity_factored(factor, sigma), fidelity(g, sigma), 1e-12);
    }
}

TEST(Fidelity, PureArgumentReducesToExpectation) {
    Rng rng(31);
    for (int c = 0; c < 10; ++c) {
        const ComplexMatrix rho = random_density(3, 1 + c % 8, rng);
        const ComplexMatrix u = random_unitary(3, rng);
        const Eigen::VectorXcd psi = u.col(0);
        const double expected = (psi.adjoint() * rho * psi)(0, 0).real();
        EXPECT_NEAR(fidelity(rho, psi * psi.adjoint()), expected, 1e-12);
        EXPECT_NEAR(fidelity(psi * psi.adjoint(), rho), expected, 1e-12);
    }
}

TEST(TraceDistanceAndTopK, Examples) {
    EXPECT_NEAR(trace_distance(maximally_mixed(2), phi_plus(1)), 0.75, 1e-12);
    EXPECT_NEAR(top_k_eigenvalue_sum(maximally_mixed(2), 1), 0.25, 1e-15);
    EXPECT_THROW(top_k_eigenvalue_sum(maximally_mixed(2), 5), DimensionError);
}

TEST(KronHelpers, MatchExplicitKron) {
    Rng rng(29);
    const ComplexMatrix a = random_unitary(1, rng), b = random_unitary(2, rng), x = random_density(3, 8, rng);
    const ComplexMatrix ab = oracle::kron(a, b);
    EXPECT_LT(max_abs_entry(apply_kron_left(a, b, x) - ab * x), 1e-13);
    EXPECT_LT(max_abs_entry(conjugate_by_kron(a, b, x) - ab * x * ab.adjoint()), 1e-13);
}

TEST(DensityChecks, Tolerances) {
    EXPECT_TRUE(is_density_matrix(maximally_mixed(2)));
    EXPECT_FALSE(is_density_matrix(diag({1.1, -0.1})));
    EXPECT_FALSE(is_density_matrix(diag({0.6, 0.6})));
    EXPECT_EQ(qubit_count(16), 4);
    EXPECT_THROW(qubit_count(6), DimensionError);
}
