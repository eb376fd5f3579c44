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

#include "channelpress/config.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "channelpress/json_util.hpp"

namespace channelpress {

namespace {

using nlohmann::json;

const json& empty_object() {
    static const json empty = json::object();
    return empty;
}

// Typed accessors for one JSON object; every failure names the key.
class Section {
   public:
    Section(const json& j, std::string context) : j_(j), context_(std::move(context)) {
        if (!j_.is_object()) throw SchemaError(context_ + " must be a JSON object", context_);
    }

    void only(std::initializer_list<std::string_view> keys) const { require_only_keys(j_, keys, context_); }
    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    const json& raw(const std::string& key) const { return require_key(j_, key, context_); }

    long long integer(const std::string& key, long long fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw SchemaError(where(key) + " must be an integer", key);
        return v.get<long long>();
    }
    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw SchemaError(where(key) + " must be a nonnegative integer", key);
        }
        return v.get<std::uint64_t>();
    }
    int small_int(const std::string& key, int fallback) const {
        const long long v = integer(key, fallback);
        if (v < -1000000 || v > 1000000) throw SchemaError(where(key) + " is out of range", key);
        return static_cast<int>(v);
    }
    double number(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number()) throw SchemaError(where(key) + " must be a number", key);
        return v.get<double>();
    }
    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw SchemaError(where(key) + " must be true or false", key);
        return v.get<bool>();
    }
    std::string string(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_string()) throw SchemaError(where(key) + " must be a string", key);
        return v.get<std::string>();
    }
    std::string kind() const {
        if (!has("kind")) throw SchemaError(context_ + ": missing required key \"kind\"", "kind");
        return string("kind", "");
    }
    Section child(const std::string& key) const { return Section(j_.at(key), context_ + "." + key); }
    const std::string& context() const { return context_; }

   private:
    std::string where(const std::string& key) const { return context_ + "." + key; }

    const json& j_;
    std::string context_;
};

AnsatzSpec parse_ansatz(const Section& s, int n_qubits, const AnsatzSpec& fallback) {
    s.only({"layers", "entanglement"});
    AnsatzSpec a;
    a.n_qubits = n_qubits;
    a.layers = s.small_int("layers", fallback.layers);
    try {
        a.entanglement =
            entanglement_from_name(s.string("entanglement", std::string(entanglement_name(fallback.entanglement))));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(s.context() + ".entanglement: " + e.what(), "entanglement");
    }
    return a;
}

ParamDistribution parse_distribution(const Section& s, const ParamDistribution& fallback) {
    s.only({"mu", "sigma"});
    return {s.number("mu", fallback.mu), s.number("sigma", fallback.sigma)};
}

OptimizerConfig parse_optimizer(const Section& s) {
    const std::string kind = s.kind();
    if (kind == "lbfgs") {
        s.only({"kind", "history", "c1", "c2", "max_line_search"});
        LbfgsConfig c;
        c.history = s.small_int("history", c.history);
        c.c1 = s.number("c1", c.c1);
        c.c2 = s.number("c2", c.c2);
        c.max_line_search = s.small_int("max_line_search", c.max_line_search);
        if (c.history < 1 || c.max_line_search < 1 || !(0.0 < c.c1 && c.c1 < c.c2 && c.c2 < 1.0)) {
            throw SchemaError(s.context() + ": need history >= 1, max_line_search >= 1, 0 < c1 < c2 < 1", "kind");
        }
        return c;
    }
    if (kind == "adam") {
        s.only({"kind", "lr", "beta1", "beta2", "eps"});
        AdamConfig c;
        c.lr = s.number("lr", c.lr);
        c.beta1 = s.number("beta1", c.beta1);
        c.beta2 = s.number("beta2", c.beta2);
        c.eps = s.number("eps", c.eps);
        if (!(c.lr > 0.0)) throw SchemaError(s.context() + ".lr must be positive", "lr");
        return c;
    }
    if (kind == "gd") {
        s.only({"kind", "lr"});
        GradientDescentConfig c;
        c.lr = s.number("lr", c.lr);
        if (!(c.lr > 0.0)) throw SchemaError(s.context() + ".lr must be positive", "lr");
        return c;
    }
    throw SchemaError(s.context() + ".kind must be one of lbfgs, adam, gd", "kind");
}

GradientMethod parse_gradient(const Section& s) {
    const std::string kind = s.kind();
    if (kind == "parameter_shift") {
        s.only({"kind"});
        return ParameterShift{};
    }
    if (kind == "finite_difference") {
        s.only({"kind", "h"});
        FiniteDifference fd;
        fd.h = s.number("h", fd.h);
        if (!(fd.h > 0.0)) throw SchemaError(s.context() + ".h must be positive", "h");
        return fd;
    }
    throw SchemaError(s.context() + ".kind must be parameter_shift or finite_difference", "kind");
}

ParamInit parse_init(const Section& s) {
    const std::string kind = s.kind();
    if (kind == "normal") {
        s.only({"kind", "mu", "sigma"});
        NormalInit n;
        n.mu = s.number("mu", n.mu);
        n.sigma = s.number("sigma", n.sigma);
        if (n.sigma < 0.0) throw SchemaError(s.context() + ".sigma must be >= 0", "sigma");
        return n;
    }
    if (kind == "uniform") {
        s.only({"kind", "low", "high"});
        UniformInit u;
        u.low = s.number("low", u.low);
        u.high = s.number("high", u.high);
        if (!(u.low <= u.high)) throw SchemaError(s.context() + ": low must not exceed high", "low");
        return u;
    }
    throw SchemaError(s.context() + ".kind must be normal or uniform", "kind");
}

TrainConfig parse_train(const Section& s) {
    s.only({"epochs", "optimizer", "gradient", "loss", "tolerance", "shots", "init", "validate_every_epoch"});
    TrainConfig t;
    t.epochs = s.small_int("epochs", t.epochs);
    if (s.has("optimizer")) t.optimizer = parse_optimizer(s.child("optimizer"));
    if (s.has("gradient")) t.gradient = parse_gradient(s.child("gradient"));
    if (s.has("loss")) t.loss = loss_from_name(s.string("loss", "L3"));
    t.tolerance = s.number("tolerance", t.tolerance);
    if (s.has("shots")) {
        t.shots = s.unsigned_integer("shots", 0);
        if (*t.shots == 0) throw SchemaError(s.context() + ".shots must be positive", "shots");
    }
    if (s.has("init")) t.init = parse_init(s.child("init"));
    t.validate_every_epoch = s.boolean("validate_every_epoch", t.validate_every_epoch);
    if (t.tolerance < 0.0) throw SchemaError(s.context() + ".tolerance must be >= 0", "tolerance");
    return t;
}

DataSource parse_data(const Section& s, const std::filesystem::path& base_dir) {
    const std::string kind = s.kind();
    if (kind == "pqc") {
        s.only({"kind"});
        return PqcData{};
    }
    if (kind == "depolarizing") {
        s.only({"kind"});
        return DepolarizingData{};
    }
    if (kind == "pauli_mixture") {
        s.only({"kind", "paulis"});
        const json& p = s.raw("paulis");
        if (!p.is_array()) throw SchemaError(s.context() + ".paulis must be an array of strings", "paulis");
        PauliMixtureData out;
        for (const auto& v : p) {
            if (!v.is_string()) throw SchemaError(s.context() + ".paulis must be an array of strings", "paulis");
            out.paulis.push_back(v.get<std::string>());
        }
        return out;
    }
    if (kind == "planted") {
        s.only({"kind", "n_channels", "latent_depth"});
        PlantedData p;
        p.n_channels = s.small_int("n_channels", p.n_channels);
        p.latent_depth = s.small_int("latent_depth", p.latent_depth);
        return p;
    }
    if (kind == "file") {
        s.only({"kind", "path"});
        const std::string path = s.string("path", "");
        if (path.empty()) throw SchemaError(s.context() + ".path is required", "path");
        return FileData{base_dir / path};
    }
    throw SchemaError(s.context() + ".kind must be one of pqc, depolarizing, pauli_mixture, planted, file", "kind");
}

AnomalySpec parse_anomaly(const Section& s) {
    s.only({"abnormal", "n_test_normal", "n_test_abnormal"});
    AnomalySpec a;
    a.n_test_normal = s.small_int("n_test_normal", a.n_test_normal);
    a.n_test_abnormal = s.small_int("n_test_abnormal", a.n_test_abnormal);
    if (!s.has("abnormal")) throw SchemaError(s.context() + ": missing required key \"abnormal\"", "abnormal");
    const Section ab = s.child("abnormal");
    const std::string kind = ab.kind();
    if (kind == "random") {
        ab.only({"kind", "depth"});
        a.abnormal = RandomDepthAbnormal{ab.small_int("depth", 10)};
    } else if (kind == "normal") {
        ab.only({"kind", "mu", "sigma"});
        NormalAbnormal n;
        n.params = {ab.number("mu", 0.0), ab.number("sigma", 0.1)};
        if (n.params.sigma < 0.0) throw SchemaError(ab.context() + ".sigma must be >= 0", "sigma");
        a.abnormal = n;
    } else {
        throw SchemaError(ab.context() + ".kind must be random or normal", "kind");
    }
    return a;
}

LandscapeSpec parse_landscape(const Section& s) {
    s.only({"i", "j", "grid", "range"});
    LandscapeSpec l;
    l.i = s.small_int("i", l.i);
    l.j = s.small_int("j", l.j);
    l.grid = s.small_int("grid", l.grid);
    l.range = s.number("range", l.range);
    if (l.grid < 1 || l.grid > 1001) throw SchemaError(s.context() + ".grid must be in [1, 1001]", "grid");
    if (!(l.range >= 0.0)) throw SchemaError(s.context() + ".range must be >= 0", "range");
    return l;
}

ExperimentConfig parse_experiment(const Section& s, const std::filesystem::path& base_dir) {
    s.only({"n_qubits", "latent_qubits", "n_circuits", "param_distribution", "ansatz", "encoder_ansatz", "data",
            "restarts"});
    ExperimentConfig cfg;
    cfg.n_qubits = s.small_int("n_qubits", cfg.n_qubits);
    cfg.latent_qubits = s.small_int("latent_qubits", cfg.latent_qubits);
    cfg.n_circuits = s.small_int("n_circuits", cfg.n_circuits);
    if (cfg.n_qubits < 1 || cfg.n_qubits > 8) throw SchemaError("experiment.n_qubits must be in [1, 8]", "n_qubits");
    if (s.has("param_distribution")) {
        cfg.param_distribution = parse_distribution(s.child("param_distribution"), cfg.param_distribution);
    }
    cfg.ansatz = parse_ansatz(s.has("ansatz") ? s.child("ansatz") : Section(empty_object(), "experiment.ansatz"),
                              cfg.n_qubits, cfg.ansatz);
    cfg.encoder_ansatz = parse_ansatz(
        s.has("encoder_ansatz") ? s.child("encoder_ansatz") : Section(empty_object(), "experiment.encoder_ansatz"),
        cfg.n_qubits, cfg.encoder_ansatz);
    if (s.has("data")) cfg.data = parse_data(s.child("data"), base_dir);
    cfg.restarts = s.small_int("restarts", cfg.restarts);
    return cfg;
}

int line_of_key(const std::string& text, const std::string& key) {
    if (key.empty()) return 0;
    const std::regex pattern("\"" + std::regex_replace(key, std::regex(R"([.^$|()\[\]{}*+?\\])"), R"(\$&)") +
                             "\"\\s*:");
    std::smatch m;
    if (!std::regex_search(text, m, pattern)) return 0;
    const auto offset = m.position(0);
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

int line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir, const std::string& source_name) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const int line = line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError(source_name + ":" + std::to_string(line) + ": invalid JSON: " + e.what(), line);
    }
    try {
        const Section top(root, "config");
        top.only({"seed", "experiment", "train", "anomaly", "landscape", "model"});
        RunConfig out;
        out.experiment = parse_experiment(
            top.has("experiment") ? top.child("experiment") : Section(empty_object(), "experiment"), base_dir);
        if (top.has("train")) out.experiment.train = parse_train(top.child("train"));
        if (top.has("anomaly")) out.experiment.anomaly = parse_anomaly(top.child("anomaly"));
        if (top.has("landscape")) out.landscape = parse_landscape(top.child("landscape"));
        if (top.has("model")) {
            const std::string path = top.string("model", "");
            if (path.empty()) throw SchemaError("config.model must be a nonempty path", "model");
            out.model_path = base_dir / path;
        }
        out.experiment.seed = top.unsigned_integer("seed", 0);
        out.experiment.validate();
        return out;
    } catch (const SchemaError& e) {
        const int line = line_of_key(text, e.key());
        const std::string where = line > 0 ? source_name + ":" + std::to_string(line) : source_name;
        throw ConfigError(where + ": " + e.what(), line);
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string(), 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path(), path.string());
}

nlohmann::json to_json(const TrainConfig& cfg) {
    json optimizer = std::visit(
        [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, LbfgsConfig>) {
                return {{"kind", "lbfgs"},
                        {"history", c.history},
                        {"c1", c.c1},
                        {"c2", c.c2},
                        {"max_line_search", c.max_line_search}};
            } else if constexpr (std::is_same_v<T, AdamConfig>) {
                return {{"kind", "adam"}, {"lr", c.lr}, {"beta1", c.beta1}, {"beta2", c.beta2}, {"eps", c.eps}};
            } else {
                return {{"kind", "gd"}, {"lr", c.lr}};
            }
        },
        cfg.optimizer);
    json gradient = std::holds_alternative<ParameterShift>(cfg.gradient)
                        ? json{{"kind", "parameter_shift"}}
                        : json{{"kind", "finite_difference"}, {"h", std::get<FiniteDifference>(cfg.gradient).h}};
    json init = std::holds_alternative<NormalInit>(cfg.init)
                    ? json{{"kind", "normal"},
                           {"mu", std::get<NormalInit>(cfg.init).mu},
                           {"sigma", std::get<NormalInit>(cfg.init).sigma}}
                    : json{{"kind", "uniform"},
                           {"low", std::get<UniformInit>(cfg.init).low},
                           {"high", std::get<UniformInit>(cfg.init).high}};
    json out = {{"epochs", cfg.epochs},
                {"optimizer", std::move(optimizer)},
                {"gradient", std::move(gradient)},
                {"loss", loss_name(cfg.loss)},
                {"tolerance", cfg.tolerance},
                {"init", std::move(init)},
                {"validate_every_epoch", cfg.validate_every_epoch}};
    if (cfg.shots) out["shots"] = *cfg.shots;
    return out;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    auto ansatz = [](const AnsatzSpec& a) {
        return json{{"layers", a.layers}, {"entanglement", entanglement_name(a.entanglement)}};
    };
    json data = std::visit(
        [](const auto& d) -> json {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PqcData>) {
                return {{"kind", "pqc"}};
            } else if constexpr (std::is_same_v<T, DepolarizingData>) {
                return {{"kind", "depolarizing"}};
            } else if constexpr (std::is_same_v<T, PauliMixtureData>) {
                return {{"kind", "pauli_mixture"}, {"paulis", d.paulis}};
            } else if constexpr (std::is_same_v<T, PlantedData>) {
                return {{"kind", "planted"}, {"n_channels", d.n_channels}, {"latent_depth", d.latent_depth}};
            } else {
                return {{"kind", "file"}, {"path", d.path.string()}};
            }
        },
        cfg.data);
    json out = {{"seed", cfg.seed},
                {"experiment",
                 {{"n_qubits", cfg.n_qubits},
                  {"latent_qubits", cfg.latent_qubits},
                  {"n_circuits", cfg.n_circuits},
                  {"param_distribution", {{"mu", cfg.param_distribution.mu}, {"sigma", cfg.param_distribution.sigma}}},
                  {"ansatz", ansatz(cfg.ansatz)},
                  {"encoder_ansatz", ansatz(cfg.encoder_ansatz)},
                  {"data", std::move(data)},
                  {"restarts", cfg.restarts}}},
                {"train", to_json(cfg.train)}};
    if (cfg.anomaly) {
        json abnormal = std::holds_alternative<RandomDepthAbnormal>(cfg.anomaly->abnormal)
                            ? json{{"kind", "random"}, {"depth", std::get<RandomDepthAbnormal>(cfg.anomaly->abnormal).depth}}
                            : json{{"kind", "normal"},
                                   {"mu", std::get<NormalAbnormal>(cfg.anomaly->abnormal).params.mu},
                                   {"sigma", std::get<NormalAbnormal>(cfg.anomaly->abnormal).params.sigma}};
        out["anomaly"] = {{"abnormal", std::move(abnormal)},
                          {"n_test_normal", cfg.anomaly->n_test_normal},
                          {"n_test_abnormal", cfg.anomaly->n_test_abnormal}};
    }
    return out;
}

}  // namespace channelpress
