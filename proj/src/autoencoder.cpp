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

#include "channelpress/autoencoder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "channelpress/json_util.hpp"
#include "channelpress/parallel.hpp"

namespace channelpress {

namespace {

struct Encoders {
    ComplexMatrix u;
    ComplexMatrix v;
};

Encoders compile(const AutoencoderModel& shape, std::span<const double> theta) {
    const auto pu = static_cast<size_t>(shape.u_ansatz().n_params());
    return {unitary_of(shape.u_ansatz(), theta.subspan(0, pu)), unitary_of(shape.v_ansatz(), theta.subspan(pu))};
}

void require_batch(Batch batch, const AutoencoderModel& model) {
    if (batch.empty()) throw DimensionError("batch is empty");
    for (const auto& e : batch) {
        if (e.n_qubits() != model.n()) {
            throw DimensionError("channel acts on " + std::to_string(e.n_qubits()) + " qubits, model expects " +
                                 std::to_string(model.n()));
        }
    }
}

// <phi+| rho |phi+> for a two-qubit density matrix.
double bell_overlap(const ComplexMatrix& rho) {
    return 0.5 * (rho(0, 0) + rho(0, 3) + rho(3, 0) + rho(3, 3)).real();
}

// Probabilities entering the loss: one global Bell overlap (L2) or one per
// trash pair (L3).
std::vector<double> loss_terms(LossKind kind, const ComplexMatrix& sigma, int t) {
    if (kind == LossKind::L2) {
        const ComplexMatrix target = phi_plus(t);
        return {(target * sigma).trace().real()};
    }
    std::vector<double> terms;
    terms.reserve(static_cast<size_t>(t));
    for (int k = 0; k < t; ++k) {
        const int keep[2] = {k, t + k};
        terms.push_back(bell_overlap(partial_trace(sigma, 2 * t, keep)));
    }
    return terms;
}

double loss_with(LossKind kind, Batch batch, const AutoencoderModel& shape, const Encoders& enc,
                 std::optional<std::uint64_t> shots, Rng* rng) {
    const int t = shape.trash_qubits();
    std::vector<double> per_channel(batch.size());
    const bool sampled = shots.has_value();
    auto one = [&](size_t i) {
        const auto terms = loss_terms(kind, trash_state(batch[i], enc.u, enc.v, shape.m()), t);
        double sum = 0.0;
        for (double p : terms) sum += sampled ? sample_probability(p, shots, rng) : p;
        per_channel[i] = sum / static_cast<double>(terms.size());
    };
    if (sampled) {
        for (size_t i = 0; i < batch.size(); ++i) one(i);
    } else {
        parallel_for(batch.size(), one);
    }
    double total = 0.0;
    for (double v : per_channel) total += v;
    return std::clamp(1.0 - total / static_cast<double>(batch.size()), 0.0, 1.0);
}

// Choi vectors psi_i of V W_i U scaled by sqrt(p_i), as columns.
ComplexMatrix encoded_factor(const MixedUnitaryChannel& e, const Encoders& enc) {
    const Eigen::Index d = enc.u.rows();
    ComplexMatrix factor(d * d, static_cast<Eigen::Index>(e.size()));
    for (size_t i = 0; i < e.size(); ++i) {
        const ComplexMatrix mi = enc.v * e.unitaries()[i] * enc.u;
        factor.col(static_cast<Eigen::Index>(i)) = std::sqrt(e.probs()[i]) * choi_vector_of_unitary(mi);
    }
    return factor;
}

// Reshapes a Choi vector over [A', C1, B', C2] into the matrix with rows
// (a, b) and columns (c1, c2).
ComplexMatrix split_latent_trash(const ComplexVector& psi, int n, int m) {
    const Eigen::Index tdim = Eigen::Index{1} << (n - m);
    const Eigen::Index mdim = Eigen::Index{1} << m;
    const Eigen::Index d = Eigen::Index{1} << n;
    ComplexMatrix z(mdim * mdim, tdim * tdim);
    for (Eigen::Index a = 0; a < mdim; ++a) {
        for (Eigen::Index c1 = 0; c1 < tdim; ++c1) {
            const Eigen::Index ref = (a * tdim + c1) * d;
            for (Eigen::Index b = 0; b < mdim; ++b) {
                for (Eigen::Index c2 = 0; c2 < tdim; ++c2) {
                    z(a * mdim + b, c1 * tdim + c2) = psi(ref + b * tdim + c2);
                }
            }
        }
    }
    return z;
}

double population_mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
    const double mean = population_mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

AutoencoderModel::AutoencoderModel(int n, int m, Circuit u_ansatz, Circuit v_ansatz, std::vector<double> theta)
    : n_(n), m_(m), u_(std::move(u_ansatz)), v_(std::move(v_ansatz)), theta_(std::move(theta)) {
    if (m < 1 || m >= n) throw DimensionError("autoencoder needs 1 <= m < n");
    if (u_.n_qubits() != n || v_.n_qubits() != n) throw DimensionError("encoder ansatz must act on n qubits");
    if (theta_.size() != static_cast<size_t>(u_.n_params() + v_.n_params())) {
        throw DimensionError("theta has " + std::to_string(theta_.size()) + " entries, encoders need " +
                             std::to_string(u_.n_params() + v_.n_params()));
    }
}

AutoencoderModel AutoencoderModel::from_specs(int n, int m, const AnsatzSpec& u_spec, const AnsatzSpec& v_spec,
                                              std::vector<double> theta) {
    return AutoencoderModel(n, m, real_amplitudes(u_spec), real_amplitudes(v_spec), std::move(theta));
}

AutoencoderModel AutoencoderModel::with_theta(std::vector<double> theta) const {
    return AutoencoderModel(n_, m_, u_, v_, std::move(theta));
}

ComplexMatrix AutoencoderModel::u_unitary() const {
    return unitary_of(u_, std::span(theta_).subspan(0, static_cast<size_t>(u_.n_params())));
}

ComplexMatrix AutoencoderModel::v_unitary() const {
    return unitary_of(v_, std::span(theta_).subspan(static_cast<size_t>(u_.n_params())));
}

ComplexMatrix trash_state(const MixedUnitaryChannel& e, const ComplexMatrix& u, const ComplexMatrix& v, int m) {
    const int n = qubit_count(u.rows());
    if (e.n_qubits() != n || v.rows() != u.rows()) throw DimensionError("trash_state: qubit-count mismatch");
    if (m < 1 || m >= n) throw DimensionError("trash_state: need 1 <= m < n");
    const Eigen::Index d = u.rows();
    const Eigen::Index tdim = Eigen::Index{1} << (n - m);
    const Eigen::Index mdim = Eigen::Index{1} << m;

    // sigma[(c2, r), (c2', r')] = (1/D) sum_i p_i sum_{a,b}
    //     M_i[(b, c2), (a, r)] conj(M_i[(b, c2'), (a, r')]),  M_i = V W_i U.
    ComplexMatrix sigma = ComplexMatrix::Zero(tdim * tdim, tdim * tdim);
    ComplexMatrix blocks(tdim * tdim, mdim * mdim);
    for (size_t i = 0; i < e.size(); ++i) {
        const ComplexMatrix mi = v * e.unitaries()[i] * u;
        for (Eigen::Index a = 0; a < mdim; ++a) {
            for (Eigen::Index b = 0; b < mdim; ++b) {
                const Eigen::Index col = a * mdim + b;
                for (Eigen::Index c2 = 0; c2 < tdim; ++c2) {
                    for (Eigen::Index r = 0; r < tdim; ++r) blocks(c2 * tdim + r, col) = mi(b * tdim + c2, a * tdim + r);
                }
            }
        }
        sigma.noalias() += e.probs()[i] * (blocks * blocks.adjoint());
    }
    return sigma / static_cast<double>(d);
}

ComplexMatrix trash_state(const MixedUnitaryChannel& e, const AutoencoderModel& model) {
    if (e.n_qubits() != model.n()) throw DimensionError("trash_state: qubit-count mismatch");
    return trash_state(e, model.u_unitary(), model.v_unitary(), model.m());
}

ComplexMatrix bell_pair_projector(int trash_qubits, int k) {
    const int t = trash_qubits;
    if (k < 0 || k >= t) throw DimensionError("bell_pair_projector: pair index out of range");
    // Build on the order [trash k, reference k, others...] and move into place.
    const ComplexMatrix base = kron(phi_plus(1), identity(2 * t - 2));
    std::vector<int> perm;
    perm.push_back(k);
    perm.push_back(t + k);
    for (int q = 0; q < 2 * t; ++q) {
        if (q != k && q != t + k) perm.push_back(q);
    }
    return permute_qubits(base, 2 * t, perm);
}

double sample_probability(double p, std::optional<std::uint64_t> shots, Rng* rng) {
    if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) {
        throw NumericalError("overlap probability " + std::to_string(p) + " outside [0, 1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    if (!shots) return p;
    if (*shots == 0) throw DimensionError("shot count must be positive");
    if (rng == nullptr) throw DimensionError("shot sampling requires a random source");
    return static_cast<double>(rng->binomial(*shots, p)) / static_cast<double>(*shots);
}

double estimate_overlap(const ComplexMatrix& sigma, const ComplexMatrix& projector,
                        std::optional<std::uint64_t> shots, Rng& rng) {
    if (sigma.rows() != projector.rows()) throw DimensionError("estimate_overlap: dimension mismatch");
    return sample_probability((projector * sigma).trace().real(), shots, &rng);
}

double evaluate_loss(LossKind kind, Batch batch, const AutoencoderModel& model, std::optional<std::uint64_t> shots,
                     Rng* rng) {
    require_batch(batch, model);
    return loss_with(kind, batch, model, compile(model, model.theta()), shots, rng);
}

double loss_L2(Batch batch, const AutoencoderModel& model) { return evaluate_loss(LossKind::L2, batch, model); }

double loss_L3(Batch batch, const AutoencoderModel& model) { return evaluate_loss(LossKind::L3, batch, model); }

bool parameter_shift_applicable(const Circuit& circuit) {
    std::map<int, int> uses;
    for (const Gate& g : circuit.gates()) {
        if (const auto* s = std::get_if<SymbolicParam>(&g.param)) {
            if (!is_rotation(g.kind)) return false;
            ++uses[s->index];
        }
    }
    for (const auto& [index, count] : uses) {
        if (count != 1) return false;
    }
    return true;
}

std::vector<double> gradient(const LossFn& loss, const AutoencoderModel& model, const GradientMethod& method,
                             bool parallel) {
    const bool shift = std::holds_alternative<ParameterShift>(method);
    if (shift && !(parameter_shift_applicable(model.u_ansatz()) && parameter_shift_applicable(model.v_ansatz()))) {
        throw DimensionError("parameter shift requires each symbolic parameter to drive exactly one rotation gate");
    }
    const double step = shift ? std::numbers::pi / 2.0 : std::get<FiniteDifference>(method).h;
    if (!(step > 0.0)) throw DimensionError("finite-difference step must be positive");
    const std::vector<double>& theta = model.theta();
    std::vector<double> grad(theta.size());
    auto one = [&](size_t j) {
        std::vector<double> shifted = theta;
        shifted[j] = theta[j] + step;
        const double plus = loss(shifted);
        shifted[j] = theta[j] - step;
        const double minus = loss(shifted);
        grad[j] = shift ? 0.5 * (plus - minus) : (plus - minus) / (2.0 * step);
    };
    if (parallel) {
        parallel_for(theta.size(), one);
    } else {
        for (size_t j = 0; j < theta.size(); ++j) one(j);
    }
    return grad;
}

std::vector<double> initial_theta(std::size_t count, const TrainConfig& config) {
    Rng rng(derive_seed(config.seed, 0));
    std::vector<double> theta(count);
    for (double& x : theta) {
        x = std::visit(
            [&](const auto& init) {
                using T = std::decay_t<decltype(init)>;
                if constexpr (std::is_same_v<T, NormalInit>) {
                    return rng.normal(init.mu, init.sigma);
                } else {
                    return rng.uniform(init.low, init.high);
                }
            },
            config.init);
    }
    return theta;
}

ChoiMatrix encoded_choi(const MixedUnitaryChannel& e, const AutoencoderModel& model) {
    if (e.n_qubits() != model.n()) throw DimensionError("encoded_choi: qubit-count mismatch");
    const ComplexMatrix factor = encoded_factor(e, compile(model, model.theta()));
    return ChoiMatrix::trusted(model.n(), model.n(), factor * factor.adjoint());
}

ChoiMatrix compress(const MixedUnitaryChannel& e, const AutoencoderModel& model) {
    if (e.n_qubits() != model.n()) throw DimensionError("compress: qubit-count mismatch");
    const ComplexMatrix factor = encoded_factor(e, compile(model, model.theta()));
    const Eigen::Index mdim = Eigen::Index{1} << model.m();
    ComplexMatrix jf = ComplexMatrix::Zero(mdim * mdim, mdim * mdim);
    for (Eigen::Index i = 0; i < factor.cols(); ++i) {
        const ComplexMatrix z = split_latent_trash(factor.col(i), model.n(), model.m());
        jf.noalias() += z * z.adjoint();
    }
    jf = (jf + jf.adjoint()) * 0.5;
    return ChoiMatrix::trusted(model.m(), model.m(), std::move(jf));
}

ChoiMatrix reconstruct(const ChoiMatrix& jf, const AutoencoderModel& model) {
    if (jf.n_in() != model.m() || jf.n_out() != model.m()) {
        throw DimensionError("reconstruct: latent Choi does not match the model's latent size");
    }
    const ChoiMatrix padded = tensor_choi(jf, identity_choi(model.trash_qubits()));
    return conjugate_choi(padded, ComplexMatrix(model.u_unitary().adjoint()),
                          ComplexMatrix(model.v_unitary().adjoint()));
}

double reconstruction_fidelity(const MixedUnitaryChannel& e, const AutoencoderModel& model) {
    if (e.n_qubits() != model.n()) throw DimensionError("reconstruction_fidelity: qubit-count mismatch");
    const int n = model.n(), m = model.m();
    const ComplexMatrix factor = encoded_factor(e, compile(model, model.theta()));
    const Eigen::Index tdim = Eigen::Index{1} << (n - m);
    const Eigen::Index mdim = Eigen::Index{1} << m;

    // J^F = sum_i Z_i Z_i^dagger, and the Gram entries of J^F kron phi+ in the
    // basis of the J^Pi factor reduce to w_i^dagger J^F w_j with w_i = Z_i phi.
    ComplexVector phi = ComplexVector::Zero(tdim * tdim);
    for (Eigen::Index c = 0; c < tdim; ++c) phi(c * tdim + c) = 1.0 / std::sqrt(static_cast<double>(tdim));
    ComplexMatrix jf = ComplexMatrix::Zero(mdim * mdim, mdim * mdim);
    ComplexMatrix w(mdim * mdim, factor.cols());
    for (Eigen::Index i = 0; i < factor.cols(); ++i) {
        const ComplexMatrix z = split_latent_trash(factor.col(i), n, m);
        jf.noalias() += z * z.adjoint();
        w.col(i) = z * phi;
    }
    return fidelity_factored(w, jf);
}

double perfect_compression_residual(const MixedUnitaryChannel& e, const AutoencoderModel& model) {
    const ComplexMatrix sigma = trash_state(e, model);
    return std::clamp(trace_distance(sigma, phi_plus(model.trash_qubits())), 0.0, 1.0);
}

double recovery_bound(const MixedUnitaryChannel& e, int m) {
    if (m < 0 || m >= e.n_qubits()) throw DimensionError("recovery_bound: need m < n");
    // J^E = F F^dagger shares its nonzero spectrum with the Gram matrix F^dagger F.
    const ComplexMatrix factor = choi_factor_of_mixed(e);
    const ComplexMatrix gram = factor.adjoint() * factor;
    const auto k = std::min<Eigen::Index>(Eigen::Index{1} << (2 * m), gram.rows());
    const auto eig = hermitian_eig(gram);
    return std::clamp(eig.values.head(k).sum(), 0.0, 1.0);
}

std::pair<AutoencoderModel, TrainReport> train(Batch batch, const AutoencoderModel& initial,
                                               const TrainConfig& config) {
    require_batch(batch, initial);
    if (config.epochs < 1) throw DimensionError("epochs must be >= 1");
    const auto started = std::chrono::steady_clock::now();

    Rng shot_rng(derive_seed(config.seed, 1));
    Rng* rng = config.shots ? &shot_rng : nullptr;
    const bool parallel = !config.shots;

    const LossFn loss = [&](std::span<const double> theta) {
        return loss_with(config.loss, batch, initial, compile(initial, theta), config.shots, rng);
    };
    const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        std::vector<double> theta(x.data(), x.data() + x.size());
        const double value = loss(theta);
        const auto g = gradient(loss, initial.with_theta(std::move(theta)), config.gradient, parallel);
        grad = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
        return value;
    };

    TrainReport report;
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(initial.theta().data(),
                                                          static_cast<Eigen::Index>(initial.theta().size()));
    Eigen::VectorXd g(x.size());
    double fx = objective(x, g);
    if (!std::isfinite(fx)) throw NumericalError("training diverged: initial loss is not finite");
    report.initial_loss = fx;

    auto validate = [&](const AutoencoderModel& model) {
        std::vector<double> infidelity(batch.size()), fid(batch.size());
        for (size_t i = 0; i < batch.size(); ++i) {
            fid[i] = reconstruction_fidelity(batch[i], model);
            infidelity[i] = 1.0 - fid[i];
        }
        double sq = 0.0;
        for (double f : fid) sq += f * f;
        report.val_infidelity_mean.push_back(population_mean(infidelity));
        report.val_infidelity_std.push_back(population_std(infidelity));
        report.val_squared_error.push_back(1.0 - sq / static_cast<double>(batch.size()));
    };

    auto optimizer = make_optimizer(config.optimizer);
    double previous = fx;
    report.stop_reason = "epoch limit";
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const StepResult step = optimizer->step(x, fx, g, objective);
        if (!std::isfinite(fx) || !x.allFinite()) {
            std::ostringstream msg;
            msg << "training diverged at epoch " << epoch << ": loss=" << fx;
            throw NumericalError(msg.str());
        }
        report.loss_trace.push_back(fx);
        report.epochs_run = epoch;
        const bool last_epoch = epoch == config.epochs;
        const bool converged = std::abs(previous - fx) < config.tolerance;
        const bool stalled = !step.moved;
        if (config.validate_every_epoch || last_epoch || converged || stalled) {
            validate(initial.with_theta(std::vector<double>(x.data(), x.data() + x.size())));
        }
        if (stalled) {
            report.stop_reason = "no descent step found";
            break;
        }
        if (converged) {
            report.stop_reason = "loss change below tolerance";
            break;
        }
        previous = fx;
    }
    report.final_theta.assign(x.data(), x.data() + x.size());
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return {initial.with_theta(report.final_theta), std::move(report)};
}

std::pair<AutoencoderModel, TrainReport> train(Batch batch, int n, int m, const AnsatzSpec& u_spec,
                                               const AnsatzSpec& v_spec, const TrainConfig& config) {
    const auto count = static_cast<size_t>(u_spec.n_params() + v_spec.n_params());
    return train(batch, AutoencoderModel::from_specs(n, m, u_spec, v_spec, initial_theta(count, config)), config);
}

std::vector<std::vector<double>> landscape_slice(Batch batch, const AutoencoderModel& model, int i, int j,
                                                 int grid, double range, LossKind kind) {
    const int count = static_cast<int>(model.n_params());
    if (i < 0 || j < 0 || i >= count || j >= count) throw DimensionError("landscape_slice: index out of range");
    if (i == j) throw DimensionError("landscape_slice: indices must differ");
    if (grid < 1) throw DimensionError("landscape_slice: grid must be >= 1");
    require_batch(batch, model);
    std::vector<double> offsets(static_cast<size_t>(grid), 0.0);
    if (grid > 1) {
        for (int k = 0; k < grid; ++k) offsets[static_cast<size_t>(k)] = range * (-1.0 + 2.0 * k / (grid - 1));
    }
    std::vector<std::vector<double>> out(static_cast<size_t>(grid), std::vector<double>(static_cast<size_t>(grid)));
    parallel_for(static_cast<size_t>(grid) * static_cast<size_t>(grid), [&](size_t cell) {
        const size_t r = cell / static_cast<size_t>(grid), c = cell % static_cast<size_t>(grid);
        std::vector<double> theta = model.theta();
        theta[static_cast<size_t>(i)] += offsets[r];
        theta[static_cast<size_t>(j)] += offsets[c];
        out[r][c] = loss_with(kind, batch, model, compile(model, theta), std::nullopt, nullptr);
    });
    return out;
}

std::string_view loss_name(LossKind kind) { return kind == LossKind::L2 ? "L2" : "L3"; }

LossKind loss_from_name(std::string_view name) {
    if (name == "L2") return LossKind::L2;
    if (name == "L3") return LossKind::L3;
    throw SchemaError("unknown loss \"" + std::string(name) + "\"", "loss");
}

nlohmann::json to_json(const AutoencoderModel& model) {
    return {{"n", model.n()},
            {"m", model.m()},
            {"u_ansatz", to_json(model.u_ansatz())},
            {"v_ansatz", to_json(model.v_ansatz())},
            {"theta", model.theta()}};
}

AutoencoderModel model_from_json(const nlohmann::json& j) {
    require_only_keys(j, {"n", "m", "u_ansatz", "v_ansatz", "theta"}, "model");
    try {
        return AutoencoderModel(require_key(j, "n", "model").get<int>(), require_key(j, "m", "model").get<int>(),
                                circuit_from_json(require_key(j, "u_ansatz", "model")),
                                circuit_from_json(require_key(j, "v_ansatz", "model")),
                                require_key(j, "theta", "model").get<std::vector<double>>());
    } catch (const DimensionError& e) {
        throw SchemaError(std::string("model: ") + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("model: ") + e.what());
    }
}

nlohmann::json to_json(const TrainReport& report) {
    return {{"loss_trace", report.loss_trace},
            {"val_mean", report.val_infidelity_mean},
            {"val_std", report.val_infidelity_std},
            {"val_squared_error", report.val_squared_error},
            {"final_theta", report.final_theta},
            {"initial_loss", report.initial_loss},
            {"epochs_run", report.epochs_run},
            {"stop_reason", report.stop_reason}};
}

std::string report_csv(const TrainReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,loss,val_mean,val_std,val_squared_error\n";
    for (size_t e = 0; e < report.loss_trace.size(); ++e) {
        out << e + 1 << ',' << report.loss_trace[e];
        if (e < report.val_infidelity_mean.size() && report.val_infidelity_mean.size() == report.loss_trace.size()) {
            out << ',' << report.val_infidelity_mean[e] << ',' << report.val_infidelity_std[e] << ','
                << report.val_squared_error[e];
        } else if (e + 1 == report.loss_trace.size() && !report.val_infidelity_mean.empty()) {
            out << ',' << report.val_infidelity_mean.back() << ',' << report.val_infidelity_std.back() << ','
                << report.val_squared_error.back();
        } else {
            out << ",,,";
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace channelpress
