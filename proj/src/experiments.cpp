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

#include "channelpress/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "channelpress/json_util.hpp"
#include "channelpress/rng.hpp"

namespace channelpress {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

std::string format_number(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

std::string norm_label(const ParamDistribution& d) {
    std::ostringstream out;
    out << "norm(" << d.mu << ',' << d.sigma << ')';
    return out.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

nlohmann::json ansatz_json(const AnsatzSpec& a) {
    return {{"n_qubits", a.n_qubits}, {"layers", a.layers}, {"entanglement", entanglement_name(a.entanglement)}};
}

Dataset with_channels(nlohmann::json meta, std::vector<MixedUnitaryChannel> channels) {
    meta["generator"] = Rng::kGeneratorName;
    return {std::move(meta), std::move(channels)};
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n_qubits < 1) throw SchemaError("n_qubits must be >= 1", "n_qubits");
    if (latent_qubits < 1 || latent_qubits >= n_qubits) {
        throw SchemaError("latent_qubits must satisfy 1 <= latent_qubits < n_qubits", "latent_qubits");
    }
    if (n_circuits < 1) throw SchemaError("n_circuits must be >= 1", "n_circuits");
    if (param_distribution.sigma < 0.0) throw SchemaError("sigma must be >= 0", "sigma");
    if (ansatz.n_qubits != n_qubits || ansatz.layers < 1) {
        throw SchemaError("ansatz must act on n_qubits with layers >= 1", "ansatz");
    }
    if (encoder_ansatz.n_qubits != n_qubits || encoder_ansatz.layers < 1) {
        throw SchemaError("encoder_ansatz must act on n_qubits with layers >= 1", "encoder_ansatz");
    }
    if (train.epochs < 1) throw SchemaError("epochs must be >= 1", "epochs");
    if (restarts < 1) throw SchemaError("restarts must be >= 1", "restarts");
    if (anomaly) {
        if (anomaly->n_test_normal < 1 || anomaly->n_test_abnormal < 1) {
            throw SchemaError("anomaly test counts must be >= 1", "anomaly");
        }
        if (const auto* r = std::get_if<RandomDepthAbnormal>(&anomaly->abnormal); r && r->depth < 1) {
            throw SchemaError("abnormal depth must be >= 1", "depth");
        }
    }
    if (const auto* p = std::get_if<PlantedData>(&data); p && (p->n_channels < 1 || p->latent_depth < 1)) {
        throw SchemaError("planted n_channels and latent_depth must be >= 1", "data");
    }
    if (const auto* p = std::get_if<PauliMixtureData>(&data)) {
        if (p->paulis.empty()) throw SchemaError("pauli_mixture needs at least one string", "paulis");
        for (const auto& s : p->paulis) {
            if (static_cast<int>(s.size()) != n_qubits) {
                throw SchemaError("Pauli string \"" + s + "\" does not have n_qubits characters", "paulis");
            }
        }
    }
}

std::uint64_t stream_seed(const ExperimentConfig& cfg, SeedStream stream) {
    return derive_seed(cfg.seed, static_cast<std::uint64_t>(stream));
}

nlohmann::json to_json(const Dataset& d) {
    nlohmann::json j = d.meta;
    nlohmann::json channels = nlohmann::json::array();
    for (const auto& e : d.channels) channels.push_back(to_json(e));
    j["channels"] = std::move(channels);
    return j;
}

Dataset dataset_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("dataset must be a JSON object");
    const auto& channels = require_key(j, "channels", "dataset");
    if (!channels.is_array() || channels.empty()) throw SchemaError("dataset: channels must be a nonempty array", "channels");
    Dataset d;
    d.meta = j;
    d.meta.erase("channels");
    for (const auto& c : channels) d.channels.push_back(channel_from_json(c));
    const int n = d.channels.front().n_qubits();
    for (const auto& e : d.channels) {
        if (e.n_qubits() != n) throw SchemaError("dataset: channels act on different qubit counts", "channels");
    }
    return d;
}

Dataset gen_pqc_dataset(const ExperimentConfig& cfg) {
    return gen_pqc_dataset(cfg, cfg.n_circuits, cfg.param_distribution, stream_seed(cfg, SeedStream::Dataset));
}

Dataset gen_pqc_dataset(const ExperimentConfig& cfg, int count, const ParamDistribution& dist, std::uint64_t seed) {
    const Circuit ansatz = real_amplitudes(cfg.ansatz);
    std::vector<MixedUnitaryChannel> channels;
    for (const auto& p : sample_params(count, ansatz.n_params(), dist.mu, dist.sigma, seed)) {
        channels.push_back(MixedUnitaryChannel::unitary(ansatz.bind(p)));
    }
    return with_channels({{"kind", "pqc"},
                          {"seed", seed},
                          {"mu", dist.mu},
                          {"sigma", dist.sigma},
                          {"ansatz", ansatz_json(cfg.ansatz)}},
                         std::move(channels));
}

Dataset gen_random_dataset(int n_qubits, int count, int depth, std::uint64_t seed) {
    std::vector<MixedUnitaryChannel> channels;
    for (int i = 0; i < count; ++i) {
        channels.push_back(MixedUnitaryChannel::unitary(
            random_circuit(n_qubits, depth, derive_seed(seed, static_cast<std::uint64_t>(i)))));
    }
    return with_channels({{"kind", "random"}, {"seed", seed}, {"depth", depth}}, std::move(channels));
}

PlantedInstance gen_planted(const ExperimentConfig& cfg) {
    const auto& planted = std::get<PlantedData>(cfg.data);
    const std::uint64_t seed = stream_seed(cfg, SeedStream::Planted);
    Rng rng(seed);
    const Circuit u = real_amplitudes(cfg.encoder_ansatz);
    const Circuit v = real_amplitudes(cfg.encoder_ansatz);
    std::vector<double> theta0(static_cast<size_t>(u.n_params() + v.n_params()));
    for (double& x : theta0) x = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const std::span<const double> all(theta0);
    const Circuit u_inv = inverse(u.bind(all.first(static_cast<size_t>(u.n_params()))));
    const Circuit v_inv = inverse(v.bind(all.subspan(static_cast<size_t>(u.n_params()))));

    std::vector<MixedUnitaryChannel> channels;
    for (int i = 0; i < planted.n_channels; ++i) {
        const Circuit w = random_circuit(cfg.latent_qubits, planted.latent_depth,
                                         derive_seed(seed, static_cast<std::uint64_t>(i) + 1));
        // Applied in order: U^dagger, then W on the latent qubits, then V^dagger.
        Circuit e(cfg.n_qubits);
        for (const Gate& g : u_inv.gates()) e.append(g);
        for (const Gate& g : w.gates()) e.append(g);
        for (const Gate& g : v_inv.gates()) e.append(g);
        channels.push_back(MixedUnitaryChannel::unitary(std::move(e)));
    }
    Dataset d = with_channels({{"kind", "planted"},
                               {"seed", seed},
                               {"latent_depth", planted.latent_depth},
                               {"encoder_ansatz", ansatz_json(cfg.encoder_ansatz)},
                               {"theta0", theta0}},
                              std::move(channels));
    return {std::move(d), std::move(theta0)};
}

Dataset build_dataset(const ExperimentConfig& cfg) {
    return std::visit(
        Overloaded{
            [&](const PqcData&) { return gen_pqc_dataset(cfg); },
            [&](const DepolarizingData&) {
                return with_channels({{"kind", "depolarizing"}},
                                     {MixedUnitaryChannel::depolarizing(cfg.n_qubits)});
            },
            [&](const PauliMixtureData& p) {
                return with_channels({{"kind", "pauli_mixture"}, {"paulis", p.paulis}},
                                     {MixedUnitaryChannel::pauli_mixture(p.paulis)});
            },
            [&](const PlantedData&) { return gen_planted(cfg).dataset; },
            [&](const FileData& f) {
                std::ifstream in(f.path);
                if (!in) throw SchemaError("cannot read dataset file " + f.path.string(), "path");
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(in);
                } catch (const nlohmann::json::parse_error& e) {
                    throw SchemaError("dataset file " + f.path.string() + ": " + e.what(), "path");
                }
                Dataset d = dataset_from_json(j);
                if (d.channels.front().n_qubits() != cfg.n_qubits) {
                    throw SchemaError("dataset file acts on " + std::to_string(d.channels.front().n_qubits()) +
                                          " qubits, config says " + std::to_string(cfg.n_qubits),
                                      "n_qubits");
                }
                return d;
            },
        },
        cfg.data);
}

std::string distribution_label(const ExperimentConfig& cfg) {
    return std::visit(Overloaded{
                          [&](const PqcData&) { return norm_label(cfg.param_distribution); },
                          [](const DepolarizingData&) { return std::string("depolarizing"); },
                          [](const PauliMixtureData&) { return std::string("pauli_mixture"); },
                          [](const PlantedData&) { return std::string("planted"); },
                          [](const FileData& f) { return "file:" + f.path.filename().string(); },
                      },
                      cfg.data);
}

std::pair<AutoencoderModel, TrainReport> train_best(Batch batch, const ExperimentConfig& cfg) {
    std::optional<std::pair<AutoencoderModel, TrainReport>> best;
    double wall = 0.0;
    for (int r = 0; r < cfg.restarts; ++r) {
        TrainConfig tc = cfg.train;
        tc.seed = derive_seed(stream_seed(cfg, SeedStream::Train), static_cast<std::uint64_t>(r));
        auto run = train(batch, cfg.n_qubits, cfg.latent_qubits, cfg.encoder_ansatz, cfg.encoder_ansatz, tc);
        wall += run.second.wall_time;
        const double loss = run.second.loss_trace.back();
        if (!best || loss < best->second.loss_trace.back()) best = std::move(run);
        if (loss <= cfg.train.tolerance) break;
    }
    best->second.wall_time = wall;
    return std::move(*best);
}

DimredResult run_dimension_reduction(const ExperimentConfig& cfg) {
    cfg.validate();
    Dataset dataset = build_dataset(cfg);
    auto [model, report] = train_best(dataset.channels, cfg);

    DimredRow row;
    row.m_circuits = static_cast<int>(dataset.channels.size());
    row.distribution = distribution_label(cfg);
    row.n = cfg.n_qubits;
    row.d = cfg.latent_qubits;
    row.final_L3 = evaluate_loss(LossKind::L3, dataset.channels, model);
    row.val_mean = report.val_infidelity_mean.back();
    row.val_std = report.val_infidelity_std.back();
    row.val_squared_error = report.val_squared_error.back();
    std::vector<double> bounds;
    for (const auto& e : dataset.channels) bounds.push_back(recovery_bound(e, cfg.latent_qubits));
    row.bound_mean = mean_of(bounds);
    row.wall_time_s = report.wall_time;
    row.seed = cfg.seed;
    row.stop_reason = report.stop_reason;
    return {std::move(row), std::move(model), std::move(report), std::move(dataset)};
}

std::string results_csv_header() {
    return "m_circuits,distribution,n,d,final_L3,val_mean,val_std,bound_mean,wall_time_s,seed\n";
}

std::string results_csv_line(const DimredRow& row) {
    std::ostringstream out;
    out << row.m_circuits << ',' << csv_field(row.distribution) << ',' << row.n << ',' << row.d << ','
        << format_number(row.final_L3) << ',' << format_number(row.val_mean) << ',' << format_number(row.val_std)
        << ',' << format_number(row.bound_mean) << ',' << format_number(row.wall_time_s) << ',' << row.seed << '\n';
    return out.str();
}

void append_results_csv(const std::filesystem::path& path, const DimredRow& row) {
    std::string text;
    if (std::ifstream in(path); in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    if (text.empty()) text = results_csv_header();
    if (text.back() != '\n') text += '\n';
    write_file_atomic(path, text + results_csv_line(row));
}

std::vector<double> anomaly_scores(const AutoencoderModel& model, Batch circuits) {
    std::vector<double> out;
    out.reserve(circuits.size());
    for (const auto& e : circuits) {
        if (e.n_qubits() != model.n()) {
            throw DimensionError("anomaly_scores: circuit on " + std::to_string(e.n_qubits()) +
                                 " qubits, model expects " + std::to_string(model.n()));
        }
        out.push_back(std::clamp(1.0 - reconstruction_fidelity(e, model), 0.0, 1.0));
    }
    return out;
}

double auroc(std::span<const double> scores_normal, std::span<const double> scores_abnormal) {
    if (scores_normal.empty() || scores_abnormal.empty()) throw DimensionError("auroc: empty score list");
    std::vector<double> normal(scores_normal.begin(), scores_normal.end());
    std::sort(normal.begin(), normal.end());
    double wins = 0.0;
    for (double a : scores_abnormal) {
        const auto lo = std::lower_bound(normal.begin(), normal.end(), a);
        const auto hi = std::upper_bound(lo, normal.end(), a);
        wins += static_cast<double>(lo - normal.begin()) + 0.5 * static_cast<double>(hi - lo);
    }
    return wins / (static_cast<double>(normal.size()) * static_cast<double>(scores_abnormal.size()));
}

double threshold_at_fpr(std::span<const double> scores_normal, double fpr) {
    if (scores_normal.empty()) throw DimensionError("threshold_at_fpr: empty score list");
    std::vector<double> sorted(scores_normal.begin(), scores_normal.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();
    const auto allowed = static_cast<size_t>(std::floor(fpr * static_cast<double>(n)));
    return sorted[n - 1 - std::min(allowed, n - 1)];
}

AnomalyResult run_anomaly(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!cfg.anomaly) throw SchemaError("anomaly section is required", "anomaly");
    const AnomalySpec& spec = *cfg.anomaly;
    Dataset train_set = build_dataset(cfg);
    auto [model, train_report] = train_best(train_set.channels, cfg);

    Dataset normal = gen_pqc_dataset(cfg, spec.n_test_normal, cfg.param_distribution,
                                     stream_seed(cfg, SeedStream::TestNormal));
    const std::uint64_t abnormal_seed = stream_seed(cfg, SeedStream::TestAbnormal);
    Dataset abnormal = std::visit(
        Overloaded{
            [&](const RandomDepthAbnormal& r) {
                return gen_random_dataset(cfg.n_qubits, spec.n_test_abnormal, r.depth, abnormal_seed);
            },
            [&](const NormalAbnormal& p) {
                return gen_pqc_dataset(cfg, spec.n_test_abnormal, p.params, abnormal_seed);
            },
        },
        spec.abnormal);

    AnomalyReport report;
    report.scores_normal = anomaly_scores(model, normal.channels);
    report.scores_abnormal = anomaly_scores(model, abnormal.channels);
    report.auroc = auroc(report.scores_normal, report.scores_abnormal);
    report.threshold = threshold_at_fpr(report.scores_normal, 0.05);
    const auto flagged = std::count_if(report.scores_abnormal.begin(), report.scores_abnormal.end(),
                                       [&](double s) { return s > report.threshold; });
    report.tpr_at_threshold = static_cast<double>(flagged) / static_cast<double>(report.scores_abnormal.size());
    return {std::move(report), std::move(model),    std::move(train_report),
            std::move(train_set), std::move(normal), std::move(abnormal)};
}

nlohmann::json to_json(const AnomalyReport& report) {
    return {{"scores_normal", report.scores_normal},
            {"scores_abnormal", report.scores_abnormal},
            {"auroc", report.auroc},
            {"fpr_target", 0.05},
            {"threshold_at_fpr", report.threshold},
            {"tpr_at_threshold", report.tpr_at_threshold}};
}

std::string scores_csv(const AnomalyReport& report) {
    std::ostringstream out;
    out << "set,index,score\n";
    for (size_t i = 0; i < report.scores_normal.size(); ++i) {
        out << "normal," << i << ',' << format_number(report.scores_normal[i]) << '\n';
    }
    for (size_t i = 0; i < report.scores_abnormal.size(); ++i) {
        out << "abnormal," << i << ',' << format_number(report.scores_abnormal[i]) << '\n';
    }
    return out.str();
}

nlohmann::json score_histogram(const AnomalyReport& report, int bins) {
    if (bins < 1) throw DimensionError("score_histogram: bins must be >= 1");
    auto count = [&](const std::vector<double>& scores) {
        std::vector<int> counts(static_cast<size_t>(bins), 0);
        for (double s : scores) {
            const int b = std::clamp(static_cast<int>(std::floor(s * bins)), 0, bins - 1);
            ++counts[static_cast<size_t>(b)];
        }
        return counts;
    };
    std::vector<double> edges;
    for (int b = 0; b <= bins; ++b) edges.push_back(static_cast<double>(b) / bins);
    return {{"edges", edges}, {"normal", count(report.scores_normal)}, {"abnormal", count(report.scores_abnormal)}};
}

}  // namespace channelpress
