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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "channelpress/channel.hpp"
#include "channelpress/circuit.hpp"
#include "channelpress/optimizer.hpp"
#include "channelpress/rng.hpp"
#include "json.hpp"

namespace channelpress {

/// Circuit autoencoder: encoders U (before the channel) and V (after it)
/// on n qubits. Qubits 0..m-1 carry the latent channel, m..n-1 are trash.
/// theta is [theta_U, theta_V]; the two encoders share no parameters.
class AutoencoderModel {
   public:
    AutoencoderModel(int n, int m, Circuit u_ansatz, Circuit v_ansatz, std::vector<double> theta);
    static AutoencoderModel from_specs(int n, int m, const AnsatzSpec& u_spec, const AnsatzSpec& v_spec,
                                       std::vector<double> theta);

    int n() const { return n_; }
    int m() const { return m_; }
    int trash_qubits() const { return n_ - m_; }
    const Circuit& u_ansatz() const { return u_; }
    const Circuit& v_ansatz() const { return v_; }
    const std::vector<double>& theta() const { return theta_; }
    std::size_t n_params() const { return theta_.size(); }

    AutoencoderModel with_theta(std::vector<double> theta) const;

    ComplexMatrix u_unitary() const;
    ComplexMatrix v_unitary() const;

   private:
    int n_, m_;
    Circuit u_, v_;
    std::vector<double> theta_;
};

enum class LossKind { L2, L3 };

struct ParameterShift {};
struct FiniteDifference {
    double h = 1e-5;
};
using GradientMethod = std::variant<ParameterShift, FiniteDifference>;

/// Initial-parameter distribution.
struct NormalInit {
    double mu = 0.0;
    double sigma = 0.1;
};
struct UniformInit {
    double low = 0.0;
    double high = 6.283185307179586;
};
using ParamInit = std::variant<NormalInit, UniformInit>;

struct TrainConfig {
    int epochs = 100;
    OptimizerConfig optimizer = LbfgsConfig{};
    GradientMethod gradient = ParameterShift{};
    LossKind loss = LossKind::L3;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> shots;
    ParamInit init = NormalInit{};
    /// Validation infidelity after every epoch (otherwise only after the last).
    bool validate_every_epoch = true;
};

struct TrainReport {
    std::vector<double> loss_trace;
    std::vector<double> val_infidelity_mean;
    std::vector<double> val_infidelity_std;
    /// 1 - mean F^2 over the batch (the squared-error aggregate).
    std::vector<double> val_squared_error;
    std::vector<double> final_theta;
    double initial_loss = 0.0;
    int epochs_run = 0;
    std::string stop_reason;
    double wall_time = 0.0;
};

using Batch = std::span<const MixedUnitaryChannel>;

/// Output of V o E o U on omega (latent) kron phi+ (trash input paired with
/// a reference register), with the latent output traced out. Qubit order:
/// [trash outputs 0..t-1, references t..2t-1].
ComplexMatrix trash_state(const MixedUnitaryChannel& e, const AutoencoderModel& model);

/// Same state from precompiled encoder unitaries.
ComplexMatrix trash_state(const MixedUnitaryChannel& e, const ComplexMatrix& u, const ComplexMatrix& v, int m);

/// Projector onto the Bell pair (trash output k, reference k) of a
/// trash_state register, identity elsewhere.
ComplexMatrix bell_pair_projector(int trash_qubits, int k);

/// tr(projector sigma) exactly, or a Binomial(shots, p)/shots estimate.
double estimate_overlap(const ComplexMatrix& sigma, const ComplexMatrix& projector,
                        std::optional<std::uint64_t> shots, Rng& rng);
double sample_probability(double p, std::optional<std::uint64_t> shots, Rng* rng);

/// 1 - mean_batch <phi+| sigma |phi+>.
double loss_L2(Batch batch, const AutoencoderModel& model);
/// 1 - mean_batch (1/t) sum_k tr(P_k sigma), P_k the Bell projector of pair k.
double loss_L3(Batch batch, const AutoencoderModel& model);
/// Either loss, optionally shot-sampled with `rng`.
double evaluate_loss(LossKind kind, Batch batch, const AutoencoderModel& model,
                     std::optional<std::uint64_t> shots = std::nullopt, Rng* rng = nullptr);

using LossFn = std::function<double(std::span<const double> theta)>;

/// True when every symbolic parameter drives exactly one rotation gate.
bool parameter_shift_applicable(const Circuit& circuit);

/// d loss / d theta at model.theta(). Parameter shift uses
/// [L(theta_j + pi/2) - L(theta_j - pi/2)] / 2; finite differences are central.
std::vector<double> gradient(const LossFn& loss, const AutoencoderModel& model, const GradientMethod& method,
                             bool parallel = true);

/// Initial theta drawn from config.init with the run seed.
std::vector<double> initial_theta(std::size_t count, const TrainConfig& config);

/// Variational training loop: one optimizer iteration per epoch, with
/// validation infidelity recorded on the training batch.
std::pair<AutoencoderModel, TrainReport> train(Batch batch, const AutoencoderModel& initial,
                                               const TrainConfig& config);
std::pair<AutoencoderModel, TrainReport> train(Batch batch, int n, int m, const AnsatzSpec& u_spec,
                                               const AnsatzSpec& v_spec, const TrainConfig& config);

/// Choi of V o E o U, the 2n-qubit state J^Pi.
ChoiMatrix encoded_choi(const MixedUnitaryChannel& e, const AutoencoderModel& model);

/// Latent channel Choi: J^Pi reduced to the latent input/output qubits.
ChoiMatrix compress(const MixedUnitaryChannel& e, const AutoencoderModel& model);

/// V^dagger o (F kron id_t) o U^dagger.
ChoiMatrix reconstruct(const ChoiMatrix& jf, const AutoencoderModel& model);

/// F(J^E, J^reconstructed) computed as F(J^F kron phi+, J^Pi) with a
/// low-rank factor of J^Pi; never forms a 2n-qubit matrix.
double reconstruction_fidelity(const MixedUnitaryChannel& e, const AutoencoderModel& model);

/// Trace distance between trash_state and phi+; zero exactly when
/// compression is lossless.
double perfect_compression_residual(const MixedUnitaryChannel& e, const AutoencoderModel& model);

/// Sum of the 4^m largest eigenvalues of J^E.
double recovery_bound(const MixedUnitaryChannel& e, int m);

/// grid x grid loss values with theta_i, theta_j offset over [-range, range]
/// (offset 0 when grid == 1); row index follows theta_i.
std::vector<std::vector<double>> landscape_slice(Batch batch, const AutoencoderModel& model, int i, int j,
                                                 int grid, double range, LossKind kind = LossKind::L3);

std::string_view loss_name(LossKind kind);
LossKind loss_from_name(std::string_view name);

nlohmann::json to_json(const AutoencoderModel& model);
AutoencoderModel model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrainReport& report);
/// epoch,loss,val_mean,val_std,val_squared_error
std::string report_csv(const TrainReport& report);

}  // namespace channelpress
