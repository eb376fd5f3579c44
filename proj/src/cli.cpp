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

#include "channelpress/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <functional>

#include "CLI11.hpp"
#include "channelpress/config.hpp"
#include "channelpress/experiments.hpp"
#include "channelpress/json_util.hpp"
#include "channelpress/noise_assist.hpp"
#include "channelpress/parallel.hpp"
#include "channelpress/property_suite.hpp"

namespace channelpress {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Session {
   public:
    Session(const CliInvocation& inv, std::ostream& out) : inv_(inv), out_(out) {}

    void write(const std::string& name, const std::string& text) {
        write_file_atomic(inv_.output_dir / name, text);
        out_ << "wrote " << (inv_.output_dir / name).string() << '\n';
    }
    void write_json(const std::string& name, const json& j) { write(name, dump_json(j)); }

    RunConfig load() {
        RunConfig cfg = load_config(inv_.config_path);
        if (inv_.seed_override) cfg.experiment.seed = *inv_.seed_override;
        if (inv_.shots_override) {
            if (*inv_.shots_override == 0) throw ConfigError("--shots must be positive", 0);
            cfg.experiment.train.shots = *inv_.shots_override;
        }
        write_json("config.json", to_json(cfg.experiment));
        return cfg;
    }

    std::ostream& out() { return out_; }

   private:
    const CliInvocation& inv_;
    std::ostream& out_;
};

json timing_json(double seconds) { return {{"wall_time_s", seconds}, {"threads", worker_count()}}; }

void write_training(Session& s, const AutoencoderModel& model, const TrainReport& report) {
    s.write_json("model.json", to_json(model));
    s.write_json("report.json", to_json(report));
    s.write("report.csv", report_csv(report));
    s.out() << "epochs " << report.epochs_run << " (" << report.stop_reason << "), final loss "
            << report.loss_trace.back() << ", val infidelity " << report.val_infidelity_mean.back() << '\n';
}

// Loads the configured model, or trains one on the configured dataset.
AutoencoderModel obtain_model(Session& s, const RunConfig& cfg, const Dataset& data) {
    if (cfg.model_path) {
        std::ifstream in(*cfg.model_path);
        if (!in) throw ConfigError("cannot read model file " + cfg.model_path->string(), 0);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("model file " + cfg.model_path->string() + ": " + e.what(), 0);
        }
        AutoencoderModel model = model_from_json(j);
        if (model.n() != cfg.experiment.n_qubits || model.m() != cfg.experiment.latent_qubits) {
            throw ConfigError("model file does not match n_qubits/latent_qubits of the config", 0);
        }
        return model;
    }
    auto [model, report] = train_best(data.channels, cfg.experiment);
    write_training(s, model, report);
    s.write_json("timing.json", timing_json(report.wall_time));
    return model;
}

int cmd_train(Session& s) {
    const RunConfig cfg = s.load();
    const Dataset data = build_dataset(cfg.experiment);
    s.write_json("dataset.json", to_json(data));
    auto [model, report] = train_best(data.channels, cfg.experiment);
    write_training(s, model, report);
    s.write_json("timing.json", timing_json(report.wall_time));
    return kExitOk;
}

int cmd_compress(Session& s) {
    const RunConfig cfg = s.load();
    const Dataset data = build_dataset(cfg.experiment);
    const AutoencoderModel model = obtain_model(s, cfg, data);
    json chois = json::array();
    for (const auto& e : data.channels) chois.push_back(to_json(compress(e, model)));
    s.write_json("compressed.json", {{"m", model.m()}, {"channels", std::move(chois)}});
    return kExitOk;
}

int cmd_reconstruct(Session& s) {
    const RunConfig cfg = s.load();
    const Dataset data = build_dataset(cfg.experiment);
    const AutoencoderModel model = obtain_model(s, cfg, data);
    json chois = json::array();
    std::vector<double> fidelities;
    for (const auto& e : data.channels) {
        const ChoiMatrix rec = reconstruct(compress(e, model), model);
        fidelities.push_back(channel_fidelity(rec, choi_of_mixed(e)));
        chois.push_back(to_json(rec));
    }
    s.write_json("reconstructed.json", {{"fidelity", fidelities}, {"channels", std::move(chois)}});
    for (size_t i = 0; i < fidelities.size(); ++i) s.out() << "channel " << i << " fidelity " << fidelities[i] << '\n';
    return kExitOk;
}

int cmd_bound(Session& s) {
    const RunConfig cfg = s.load();
    const Dataset data = build_dataset(cfg.experiment);
    std::vector<double> bounds;
    for (const auto& e : data.channels) bounds.push_back(recovery_bound(e, cfg.experiment.latent_qubits));
    double mean = 0.0;
    for (double b : bounds) mean += b;
    mean /= static_cast<double>(bounds.size());
    s.write_json("bound.json", {{"m", cfg.experiment.latent_qubits}, {"bounds", bounds}, {"mean", mean}});
    s.out().precision(12);
    s.out() << mean << '\n';
    return kExitOk;
}

int cmd_nqcae(Session& s) {
    const RunConfig cfg = s.load();
    const Dataset data = build_dataset(cfg.experiment);
    const AutoencoderModel model = obtain_model(s, cfg, data);
    const NoiseAssistedComparison cmp = compare_reconstructions(data.channels, model);
    json noise = json::array();
    for (const auto& pairs : cmp.pairs) {
        std::vector<NoisePairSpec> specs;
        for (const auto& p : pairs) specs.push_back(p.spec);
        noise.push_back(to_json(build_noise_choi(specs, model.trash_qubits())));
    }
    json j = to_json(cmp);
    j["noise_chois"] = std::move(noise);
    s.write_json("nqcae.json", j);
    for (size_t i = 0; i < cmp.qcae_fidelity.size(); ++i) {
        s.out() << "channel " << i << " QCAE " << cmp.qcae_fidelity[i] << " N-QCAE " << cmp.nqcae_fidelity[i] << '\n';
    }
    return kExitOk;
}

int cmd_dimred(Session& s, const fs::path& out_dir) {
    const RunConfig cfg = s.load();
    const DimredResult r = run_dimension_reduction(cfg.experiment);
    s.write_json("dataset.json", to_json(r.dataset));
    write_training(s, r.model, r.report);
    s.write_json("row.json", {{"m_circuits", r.row.m_circuits},
                              {"distribution", r.row.distribution},
                              {"n", r.row.n},
                              {"d", r.row.d},
                              {"final_L3", r.row.final_L3},
                              {"val_mean", r.row.val_mean},
                              {"val_std", r.row.val_std},
                              {"val_squared_error", r.row.val_squared_error},
                              {"bound_mean", r.row.bound_mean},
                              {"seed", r.row.seed},
                              {"stop_reason", r.row.stop_reason}});
    s.write_json("timing.json", timing_json(r.row.wall_time_s));
    append_results_csv(out_dir / "results.csv", r.row);
    s.out() << "appended row to " << (out_dir / "results.csv").string() << '\n';
    return kExitOk;
}

int cmd_anomaly(Session& s) {
    const RunConfig cfg = s.load();
    if (!cfg.experiment.anomaly) throw ConfigError("the anomaly subcommand needs an \"anomaly\" section", 0);
    const AnomalyResult r = run_anomaly(cfg.experiment);
    s.write_json("dataset.json", to_json(r.train_set));
    s.write_json("test_normal.json", to_json(r.test_normal));
    s.write_json("test_abnormal.json", to_json(r.test_abnormal));
    write_training(s, r.model, r.train_report);
    json report = to_json(r.report);
    report["histogram"] = score_histogram(r.report);
    report["generator"] = Rng::kGeneratorName;
    s.write_json("anomaly.json", report);
    s.write("scores.csv", scores_csv(r.report));
    s.write_json("timing.json", timing_json(r.train_report.wall_time));
    s.out() << "AUROC " << r.report.auroc << ", threshold at 5% FPR " << r.report.threshold << '\n';
    return kExitOk;
}

int cmd_landscape(Session& s) {
    const RunConfig cfg = s.load();
    const LandscapeSpec spec = cfg.landscape.value_or(LandscapeSpec{});
    const Dataset data = build_dataset(cfg.experiment);
    AutoencoderModel model = [&] {
        if (cfg.model_path) return obtain_model(s, cfg, data);
        TrainConfig tc = cfg.experiment.train;
        tc.seed = derive_seed(stream_seed(cfg.experiment, SeedStream::Train), 0);
        const auto& a = cfg.experiment.encoder_ansatz;
        return AutoencoderModel::from_specs(cfg.experiment.n_qubits, cfg.experiment.latent_qubits, a, a,
                                            initial_theta(static_cast<size_t>(2 * a.n_params()), tc));
    }();
    const auto values = landscape_slice(data.channels, model, spec.i, spec.j, spec.grid, spec.range,
                                        cfg.experiment.train.loss);
    s.write_json("landscape.json", {{"i", spec.i},
                                    {"j", spec.j},
                                    {"grid", spec.grid},
                                    {"range", spec.range},
                                    {"loss", loss_name(cfg.experiment.train.loss)},
                                    {"theta", model.theta()},
                                    {"values", values}});
    return kExitOk;
}

int cmd_gen_data(Session& s) {
    const RunConfig cfg = s.load();
    const Dataset data = build_dataset(cfg.experiment);
    s.write_json("dataset.json", to_json(data));
    s.out() << data.channels.size() << " channels\n";
    return kExitOk;
}

int cmd_check(Session& s, const CliInvocation& inv) {
    const auto started = std::chrono::steady_clock::now();
    const auto results = run_property_suite(inv.seed_override.value_or(0));
    json j = json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        j.push_back(to_json(r));
        s.out() << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases, worst " << r.worst
                << ", tolerance " << r.tolerance << "): " << r.detail << '\n';
    }
    s.write_json("check.json", {{"passed", all}, {"properties", j}});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    s.write_json("timing.json", timing_json(seconds));
    return all ? kExitOk : kExitNumericalError;
}

void write_diagnostic(const CliInvocation& inv, const std::string& kind, const std::string& message) {
    try {
        fs::create_directories(inv.output_dir);
        write_file_atomic(inv.output_dir / "error.json",
                          dump_json({{"subcommand", inv.subcommand}, {"kind", kind}, {"message", message}}));
    } catch (const std::exception&) {
        // The diagnostic is best effort; the exit code still reports the failure.
    }
}

}  // namespace

int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    try {
        if (inv.output_dir.empty()) throw ConfigError("--out is required", 0);
        if (inv.subcommand != "check" && inv.config_path.empty()) throw ConfigError("--config is required", 0);
        fs::create_directories(inv.output_dir);
        Session s(inv, out);
        const std::map<std::string, std::function<int()>> table = {
            {"train", [&] { return cmd_train(s); }},
            {"compress", [&] { return cmd_compress(s); }},
            {"reconstruct", [&] { return cmd_reconstruct(s); }},
            {"bound", [&] { return cmd_bound(s); }},
            {"nqcae", [&] { return cmd_nqcae(s); }},
            {"dimred", [&] { return cmd_dimred(s, inv.output_dir); }},
            {"anomaly", [&] { return cmd_anomaly(s); }},
            {"landscape", [&] { return cmd_landscape(s); }},
            {"gen-data", [&] { return cmd_gen_data(s); }},
            {"check", [&] { return cmd_check(s, inv); }},
        };
        const auto it = table.find(inv.subcommand);
        if (it == table.end()) throw ConfigError("unknown subcommand \"" + inv.subcommand + "\"", 0);
        const int code = it->second();
        if (code == kExitNumericalError) write_diagnostic(inv, "property", "one or more properties failed");
        return code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const SchemaError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        write_diagnostic(inv, "numerical", e.what());
        return kExitNumericalError;
    } catch (const DimensionError& e) {
        err << "invariant violation: " << e.what() << '\n';
        write_diagnostic(inv, "invariant", e.what());
        return kExitNumericalError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"channelpress: quantum circuit autoencoder for mixed-unitary channels"};
    app.require_subcommand(1);
    CliInvocation inv;
    std::string config, output;
    std::uint64_t seed = 0, shots = 0;

    const char* names[] = {"train", "compress", "reconstruct", "bound", "nqcae",
                           "dimred", "anomaly", "landscape", "gen-data", "check"};
    const char* help[] = {"train an autoencoder on the configured dataset",
                          "write the latent channel Choi of each channel",
                          "reconstruct each channel and report its fidelity",
                          "print the recovery-fidelity upper bound",
                          "compare identity and measured-noise reconstruction",
                          "dimension-reduction experiment row",
                          "anomaly-detection experiment",
                          "2D loss-landscape slice",
                          "write the configured dataset",
                          "run the invariant self-test suite"};
    std::vector<CLI::App*> subs;
    for (size_t k = 0; k < std::size(names); ++k) {
        CLI::App* sub = app.add_subcommand(names[k], help[k]);
        auto* cfg_opt = sub->add_option("--config", config, "JSON config file");
        if (std::string(names[k]) != "check") cfg_opt->required();
        sub->add_option("--out", output, "output directory")->required();
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--shots", shots, "override the shot count");
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }
    for (CLI::App* sub : subs) {
        if (!sub->parsed()) continue;
        inv.subcommand = sub->get_name();
        if (sub->count("--seed") > 0) inv.seed_override = seed;
        if (sub->count("--shots") > 0) inv.shots_override = shots;
    }
    inv.config_path = config;
    inv.output_dir = output;
    return dispatch(inv, std::cout, std::cerr);
}

}  // namespace channelpress
