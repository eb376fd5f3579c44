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
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "channelpress/autoencoder.hpp"
#include "channelpress/channel.hpp"
#include "channelpress/circuit.hpp"
#include "json.hpp"

namespace channelpress {

struct ParamDistribution {
    double mu = 0.0;
    double sigma = 0.1;
};

/// Random circuits from random_circuit at the given depth.
struct RandomDepthAbnormal {
    int depth = 10;
};
/// Data-ansatz circuits with parameters drawn from a different normal.
struct NormalAbnormal {
    ParamDistribution params;
};
using AbnormalKind = std::variant<RandomDepthAbnormal, NormalAbnormal>;

struct AnomalySpec {
    AbnormalKind abnormal = RandomDepthAbnormal{};
    int n_test_normal = 40;
    int n_test_abnormal = 40;
};

/// Where the training batch comes from.
struct PqcData {};
struct DepolarizingData {};
struct PauliMixtureData {
    std::vector<std::string> paulis;
};
/// E_i = V(theta0)^dagger (W_i kron I) U(theta0)^dagger with random latent
/// circuits W_i, so perfect compression is reachable at theta0.
struct PlantedData {
    int n_channels = 4;
    int latent_depth = 3;
};
/// A dataset JSON written by gen-data (path resolved by the caller).
struct FileData {
    std::filesystem::path path;
};
using DataSource = std::variant<PqcData, DepolarizingData, PauliMixtureData, PlantedData, FileData>;

struct ExperimentConfig {
    int n_qubits = 4;
    int latent_qubits = 3;
    int n_circuits = 10;
    ParamDistribution param_distribution;
    AnsatzSpec ansatz{4, 2, Entanglement::Linear};
    AnsatzSpec encoder_ansatz{4, 3, Entanglement::Linear};
    TrainConfig train;
    std::optional<AnomalySpec> anomaly;
    DataSource data = PqcData{};
    std::uint64_t seed = 0;
    /// Independent training runs from different initial points; the one with
    /// the lowest final loss is kept.
    int restarts = 1;

    /// Throws SchemaError on violated invariants.
    void validate() const;
};

/// Seed streams derived from ExperimentConfig::seed.
enum class SeedStream : std::uint64_t { Dataset = 10, Train = 20, TestNormal = 30, TestAbnormal = 31, Planted = 40 };
std::uint64_t stream_seed(const ExperimentConfig& cfg, SeedStream stream);

/// Channels plus the metadata that produced them; serializes to
/// {generator, seed, kind, ..., channels:[channel JSON]}.
struct Dataset {
    nlohmann::json meta = nlohmann::json::object();
    std::vector<MixedUnitaryChannel> channels;
};
nlohmann::json to_json(const Dataset& d);
Dataset dataset_from_json(const nlohmann::json& j);

/// n_circuits bound data-ansatz circuits with parameters from `dist`.
Dataset gen_pqc_dataset(const ExperimentConfig& cfg);
Dataset gen_pqc_dataset(const ExperimentConfig& cfg, int count, const ParamDistribution& dist, std::uint64_t seed);
Dataset gen_random_dataset(int n_qubits, int count, int depth, std::uint64_t seed);

struct PlantedInstance {
    Dataset dataset;
    std::vector<double> theta0;
};
PlantedInstance gen_planted(const ExperimentConfig& cfg);

/// The training batch for cfg.data.
Dataset build_dataset(const ExperimentConfig& cfg);

/// Human-readable label of the data distribution, e.g. "norm(0,0.1)".
std::string distribution_label(const ExperimentConfig& cfg);

/// Trains cfg.restarts times and keeps the run with the lowest final loss.
std::pair<AutoencoderModel, TrainReport> train_best(Batch batch, const ExperimentConfig& cfg);

struct DimredRow {
    int m_circuits = 0;
    std::string distribution;
    int n = 0;
    int d = 0;
    double final_L3 = 0.0;
    double val_mean = 0.0;
    double val_std = 0.0;
    double val_squared_error = 0.0;
    double bound_mean = 0.0;
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    std::string stop_reason;
};

struct DimredResult {
    DimredRow row;
    AutoencoderModel model;
    TrainReport report;
    Dataset dataset;
};

DimredResult run_dimension_reduction(const ExperimentConfig& cfg);

/// m_circuits,distribution,n,d,final_L3,val_mean,val_std,bound_mean,wall_time_s,seed
std::string results_csv_header();
std::string results_csv_line(const DimredRow& row);
/// Appends one row, writing the header first when the file is new.
void append_results_csv(const std::filesystem::path& path, const DimredRow& row);

/// 1 - reconstruction fidelity per channel, clamped to [0, 1].
std::vector<double> anomaly_scores(const AutoencoderModel& model, Batch circuits);

/// Mann-Whitney U / (n1 n2): probability that an abnormal score beats a
/// normal one, ties counted 1/2.
double auroc(std::span<const double> scores_normal, std::span<const double> scores_abnormal);

/// Smallest threshold flagging at most `fpr` of the normal scores (score > threshold).
double threshold_at_fpr(std::span<const double> scores_normal, double fpr);

struct AnomalyReport {
    std::vector<double> scores_normal;
    std::vector<double> scores_abnormal;
    double auroc = 0.0;
    double threshold = 0.0;
    double tpr_at_threshold = 0.0;
};

struct AnomalyResult {
    AnomalyReport report;
    AutoencoderModel model;
    TrainReport train_report;
    Dataset train_set;
    Dataset test_normal;
    Dataset test_abnormal;
};

AnomalyResult run_anomaly(const ExperimentConfig& cfg);

nlohmann::json to_json(const AnomalyReport& report);
/// set,index,score
std::string scores_csv(const AnomalyReport& report);
/// Score counts over `bins` equal-width bins on [0, 1].
nlohmann::json score_histogram(const AnomalyReport& report, int bins = 20);

}  // namespace channelpress
