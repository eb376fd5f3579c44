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

#include "channelpress/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/QR>

#include "channelpress/autoencoder.hpp"
#include "channelpress/channel.hpp"
#include "channelpress/experiments.hpp"
#include "channelpress/json_util.hpp"

namespace channelpress {

namespace {

ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) g(r, c) = cplx{rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
    }
    return g;
}

// Random mixture of 1..max_members random circuits with random weights.
MixedUnitaryChannel random_channel(int n_qubits, int max_members, Rng& rng) {
    const int members = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(max_members)));
    std::vector<Circuit> circuits;
    std::vector<double> probs;
    double total = 0.0;
    for (int i = 0; i < members; ++i) {
        const int depth = 1 + static_cast<int>(rng.index(4));
        circuits.push_back(random_circuit(n_qubits, depth, rng.engine()()));
        probs.push_back(0.1 + rng.uniform());
        total += probs.back();
    }
    for (double& p : probs) p /= total;
    // Renormalizing by division can leave the sum one ulp off; fold it into the last weight.
    double head = 0.0;
    for (size_t i = 0; i + 1 < probs.size(); ++i) head += probs[i];
    probs.back() = 1.0 - head;
    return MixedUnitaryChannel(std::move(circuits), std::move(probs));
}

AutoencoderModel random_model(int n, int m, int layers, Rng& rng) {
    const AnsatzSpec spec{n, layers, Entanglement::Linear};
    std::vector<double> theta(static_cast<size_t>(2 * spec.n_params()));
    for (double& x : theta) x = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return AutoencoderModel::from_specs(n, m, spec, spec, std::move(theta));
}

PropertyResult finish(std::string name, int cases, double worst, double tolerance, std::string detail = {}) {
    return {std::move(name), worst <= tolerance, cases, worst, tolerance, std::move(detail)};
}

}  // namespace

ComplexMatrix random_density(int n_qubits, int rank, Rng& rng) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (rank < 1 || rank > dim) throw DimensionError("random_density: rank out of range");
    const ComplexMatrix g = ginibre(dim, rank, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

ComplexMatrix random_unitary(int n_qubits, Rng& rng) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(dim, dim, rng));
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR();
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) q.col(k) *= r(k, k) / mag;
    }
    return q;
}

PropertyResult check_fidelity_axioms(std::uint64_t seed, int cases) {
    Rng rng(seed);
    double range = 0.0, self = 0.0, symmetry = 0.0, invariance = 0.0, pure = 0.0;
    for (int c = 0; c < cases; ++c) {
        const int n = 1 + c % 4;
        const int dim = 1 << n;
        const ComplexMatrix rho = random_density(n, 1 + static_cast<int>(rng.index(dim)), rng);
        const ComplexMatrix sigma = random_density(n, 1 + static_cast<int>(rng.index(dim)), rng);
        const ComplexMatrix u = random_unitary(n, rng);
        const double f = fidelity(rho, sigma);
        range = std::max({range, -f, f - 1.0});
        self = std::max(self, std::abs(fidelity(rho, rho) - 1.0));
        symmetry = std::max(symmetry, std::abs(f - fidelity(sigma, rho)));
        invariance = std::max(
            invariance, std::abs(f - fidelity(u * rho * u.adjoint(), u * sigma * u.adjoint())));
        const ComplexVector psi = ginibre(dim, 1, rng).col(0).normalized();
        const double expected = (psi.adjoint() * rho * psi)(0, 0).real();
        pure = std::max(pure, std::abs(fidelity(rho, psi * psi.adjoint()) - expected));
    }
    std::ostringstream detail;
    detail << "range " << range << ", self " << self << ", symmetry " << symmetry << ", unitary invariance "
           << invariance << ", pure-state formula " << pure;
    // The pure-state formula carries a tighter tolerance than the other axioms.
    const double worst = std::max({range, self, symmetry, invariance, 10.0 * pure});
    return finish("fidelity_axioms", cases, worst, 1e-8, detail.str());
}

PropertyResult check_rank_fidelity_bound(std::uint64_t seed, int cases) {
    Rng rng(seed);
    double worst = 0.0;
    for (int c = 0; c < cases; ++c) {
        const int n = 1 + c % 4;
        const int dim = 1 << n;
        const int r = 1 + static_cast<int>(rng.index(dim));
        const ComplexMatrix rho = random_density(n, 1 + static_cast<int>(rng.index(dim)), rng);
        const ComplexMatrix sigma = random_density(n, r, rng);
        worst = std::max(worst, fidelity(rho, sigma) - top_k_eigenvalue_sum(rho, r));
    }
    return finish("rank_fidelity_bound", cases, worst, 1e-8, "max of F(rho, sigma) - top-r eigenvalue sum of rho");
}

PropertyResult check_choi_roundtrip(std::uint64_t seed, int cases) {
    Rng rng(seed);
    double roundtrip = 0.0, tp = 0.0, spectrum = 0.0;
    for (int c = 0; c < cases; ++c) {
        const int n = 1 + c % 3;
        const MixedUnitaryChannel e = random_channel(n, 4, rng);
        const ChoiMatrix j = choi_of_mixed(e);
        const ComplexMatrix rho = random_density(n, 1 << n, rng);
        roundtrip = std::max(roundtrip, max_abs_entry(apply_choi(j, rho) - e.apply(rho)));

        const ChoiMatrix conj = conjugate_choi(j, random_unitary(n, rng), random_unitary(n, rng));
        const ChoiMatrix other = choi_of_mixed(random_channel(1, 2, rng));
        const ChoiMatrix tensor = tensor_choi(j, other);
        tp = std::max({tp, j.tp_residual(), conj.tp_residual(), tensor.tp_residual()});
        if (n > 1) {
            const int keep[1] = {static_cast<int>(rng.index(static_cast<std::uint64_t>(n)))};
            tp = std::max(tp, reduced_choi(j, keep, keep).tp_residual());
        }
        const RealVector before = hermitian_eig(j.mat()).values;
        const RealVector after = hermitian_eig(conj.mat()).values;
        spectrum = std::max(spectrum, (before - after).cwiseAbs().maxCoeff());
    }
    std::ostringstream detail;
    detail << "apply_choi vs direct " << roundtrip << ", TP residual " << tp << ", conjugation spectrum shift "
           << spectrum;
    // Roundtrip and spectrum are held to 1e-9; the TP residual to the 1e-8 warning level.
    const double worst = std::max({roundtrip, spectrum, 0.1 * tp});
    return finish("choi_roundtrip_tp", cases, worst, 1e-9, detail.str());
}

PropertyResult check_gradient_consistency(std::uint64_t seed, int cases) {
    Rng rng(seed);
    double worst = 0.0;
    for (int c = 0; c < cases; ++c) {
        const int n = 2 + c % 3;
        const int m = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(n - 1)));
        const AutoencoderModel model = random_model(n, m, 1 + c % 2, rng);
        std::vector<MixedUnitaryChannel> batch;
        for (int b = 0; b < 1 + c % 2; ++b) batch.push_back(random_channel(n, 2, rng));
        const LossKind kind = c % 3 == 0 ? LossKind::L2 : LossKind::L3;
        const LossFn loss = [&](std::span<const double> theta) {
            return evaluate_loss(kind, batch, model.with_theta(std::vector<double>(theta.begin(), theta.end())));
        };
        const auto ps = gradient(loss, model, ParameterShift{});
        const auto fd = gradient(loss, model, FiniteDifference{1e-5});
        for (size_t k = 0; k < ps.size(); ++k) worst = std::max(worst, std::abs(ps[k] - fd[k]));
    }
    return finish("gradient_consistency", cases, worst, 1e-6, "max |parameter shift - central difference|");
}

PropertyResult check_full_fidelity_identity(std::uint64_t seed, int cases) {
    Rng rng(seed);
    double identity_gap = 0.0, bound_gap = 0.0;
    for (int c = 0; c < cases; ++c) {
        const int n = 2 + c % 2;
        const int m = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(n - 1)));
        const AutoencoderModel model = random_model(n, m, 1 + c % 2, rng);
        const MixedUnitaryChannel e = random_channel(n, 3, rng);
        const double direct = channel_fidelity(reconstruct(compress(e, model), model), choi_of_mixed(e));
        const double cheap = reconstruction_fidelity(e, model);
        identity_gap = std::max(identity_gap, std::abs(direct - cheap));
        bound_gap = std::max(bound_gap, direct - recovery_bound(e, m));
    }
    std::ostringstream detail;
    detail << "|direct - identity route| " << identity_gap << ", max F - recovery bound " << bound_gap;
    const double worst = std::max(identity_gap, bound_gap > 1e-7 ? bound_gap : 0.0);
    return finish("full_fidelity_identity", cases, worst, 1e-9, detail.str());
}

PropertyResult check_determinism(std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.n_qubits = 3;
    cfg.latent_qubits = 2;
    cfg.n_circuits = 3;
    cfg.ansatz = {3, 1, Entanglement::Linear};
    cfg.encoder_ansatz = {3, 1, Entanglement::Linear};
    cfg.train.epochs = 5;
    cfg.seed = seed;
    auto render = [&] {
        const DimredResult r = run_dimension_reduction(cfg);
        return dump_json(to_json(r.dataset)) + dump_json(to_json(r.model)) + dump_json(to_json(r.report)) +
               report_csv(r.report);
    };
    const std::string first = render();
    const std::string second = render();
    return finish("determinism", 2, first == second ? 0.0 : 1.0, 0.0,
                  first == second ? "repeated runs are byte-identical" : "repeated runs differ");
}

std::vector<PropertyResult> run_property_suite(std::uint64_t seed) {
    return {check_fidelity_axioms(derive_seed(seed, 1)),        check_rank_fidelity_bound(derive_seed(seed, 2)),
            check_choi_roundtrip(derive_seed(seed, 3)),         check_gradient_consistency(derive_seed(seed, 4)),
            check_full_fidelity_identity(derive_seed(seed, 5)), check_determinism(derive_seed(seed, 6))};
}

nlohmann::json to_json(const PropertyResult& r) {
    return {{"name", r.name},     {"passed", r.passed},       {"cases", r.cases},
            {"worst", r.worst},   {"tolerance", r.tolerance}, {"detail", r.detail}};
}

}  // namespace channelpress
