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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "channelpress/cli.hpp"
#include "channelpress/config.hpp"

using namespace channelpress;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = CHANNELPRESS_SOURCE_DIR;

class Scratch {
   public:
    explicit Scratch(const std::string& name) : root_(fs::temp_directory_path() / ("channelpress_" + name)) {
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    ~Scratch() { fs::remove_all(root_); }
    const fs::path& root() const { return root_; }
    fs::path write(const std::string& file, const std::string& text) const {
        std::ofstream(root_ / file) << text;
        return root_ / file;
    }

   private:
    fs::path root_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::set<fs::path> tree(const fs::path& root) {
    std::set<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) out.insert(fs::relative(e.path(), root));
    return out;
}

int run(const std::string& sub, const fs::path& config, const fs::path& out, std::string* stdout_text = nullptr,
        std::optional<std::uint64_t> seed = std::nullopt) {
    std::ostringstream o, e;
    const int code = dispatch({sub, config, out, seed, std::nullopt}, o, e);
    if (stdout_text) *stdout_text = o.str();
    return code;
}

const char* kTiny = R"({
  "seed": 3,
  "experiment": {
    "n_qubits": 3,
    "latent_qubits": 2,
    "n_circuits": 3,
    "ansatz": {"layers": 1, "entanglement": "linear"},
    "encoder_ansatz": {"layers": 1, "entanglement": "linear"}
  },
  "train": {"epochs": 4}
})";

}  // namespace

TEST(Config, BundledConfigsParse) {
    for (const auto& entry : fs::directory_iterator(kSource / "configs")) {
        EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
    }
    const RunConfig rc = load_config(kSource / "configs" / "table1_row1.json");
    EXPECT_EQ(rc.experiment.n_qubits, 4);
    EXPECT_EQ(rc.experiment.latent_qubits, 3);
    EXPECT_EQ(rc.experiment.n_circuits, 10);
    EXPECT_DOUBLE_EQ(rc.experiment.param_distribution.sigma, 0.1);
}

TEST(Config, UnknownKeyReportsLine) {
    const std::string text = "{\n  \"seed\": 1,\n  \"experiment\": {\n    \"n_qubit\": 4\n  }\n}\n";
    try {
        parse_config(text, ".", "bad.json");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 4);
        EXPECT_NE(std::string(e.what()).find("bad.json:4"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("n_qubit"), std::string::npos);
    }
}

TEST(Config, TypeAndRangeErrors) {
    EXPECT_THROW(parse_config(R"({"experiment": {"n_qubits": "four"}})", "."), ConfigError);
    EXPECT_THROW(parse_config(R"({"experiment": {"n_qubits": 2, "latent_qubits": 2}})", "."), ConfigError);
    EXPECT_THROW(parse_config(R"({"train": {"optimizer": {"kind": "sgd"}}})", "."), ConfigError);
    EXPECT_THROW(parse_config("{ not json", "."), ConfigError);
}

TEST(Config, ExperimentJsonRoundTrips) {
    const RunConfig rc = load_config(kSource / "configs" / "anomaly_fig4b.json");
    nlohmann::json doc = {{"seed", rc.experiment.seed}};
    const nlohmann::json ej = to_json(rc.experiment);
    for (auto it = ej.begin(); it != ej.end(); ++it) doc[it.key()] = it.value();
    const RunConfig back = parse_config(doc.dump(2), ".");
    EXPECT_EQ(to_json(back.experiment).dump(), ej.dump());
}

TEST(Cli, BoundPrintsQuarterForDepolarizing) {
    Scratch s("bound");
    std::string text;
    ASSERT_EQ(run("bound", kSource / "configs" / "depolarizing.json", s.root() / "out", &text), kExitOk);
    EXPECT_NE(text.find("0.25"), std::string::npos) << text;
    const auto j = nlohmann::json::parse(slurp(s.root() / "out" / "bound.json"));
    EXPECT_NEAR(j["mean"].get<double>(), 0.25, 1e-9);
}

TEST(Cli, TrainTwiceGivesIdenticalReports) {
    Scratch s("train_twice");
    const fs::path cfg = s.write("tiny.json", kTiny);
    ASSERT_EQ(run("train", cfg, s.root() / "a"), kExitOk);
    ASSERT_EQ(run("train", cfg, s.root() / "b"), kExitOk);
    for (const char* f : {"report.json", "report.csv", "model.json", "dataset.json", "config.json"}) {
        EXPECT_EQ(slurp(s.root() / "a" / f), slurp(s.root() / "b" / f)) << f;
    }
    ASSERT_EQ(run("train", cfg, s.root() / "c", nullptr, 99), kExitOk);
    EXPECT_NE(slurp(s.root() / "a" / "dataset.json"), slurp(s.root() / "c" / "dataset.json"));
}

TEST(Cli, WritesOnlyInsideOutputDir) {
    Scratch s("confined");
    const fs::path cfg = s.write("tiny.json", kTiny);
    const auto before = tree(s.root());
    ASSERT_EQ(run("nqcae", cfg, s.root() / "out"), kExitOk);
    ASSERT_EQ(run("gen-data", cfg, s.root() / "out2"), kExitOk);
    std::set<fs::path> after;
    for (const auto& p : tree(s.root())) {
        const std::string top = p.begin()->string();
        if (top != "out" && top != "out2") after.insert(p);
    }
    EXPECT_EQ(after, before);
}

TEST(Cli, ModelPathSkipsTraining) {
    Scratch s("model_path");
    const fs::path cfg = s.write("tiny.json", kTiny);
    ASSERT_EQ(run("train", cfg, s.root() / "trained"), kExitOk);
    nlohmann::json doc = nlohmann::json::parse(kTiny);
    doc["model"] = (s.root() / "trained" / "model.json").string();
    const fs::path cfg2 = s.write("with_model.json", doc.dump(2));
    ASSERT_EQ(run("compress", cfg2, s.root() / "c"), kExitOk);
    ASSERT_EQ(run("reconstruct", cfg2, s.root() / "r"), kExitOk);
    EXPECT_TRUE(fs::exists(s.root() / "c" / "compressed.json"));
    EXPECT_TRUE(fs::exists(s.root() / "r" / "reconstructed.json"));
    EXPECT_FALSE(fs::exists(s.root() / "c" / "report.json"));
}

TEST(Cli, ConfigErrorExitsTwo) {
    Scratch s("config_error");
    const fs::path cfg = s.write("bad.json", "{\n  \"seeed\": 1\n}\n");
    std::ostringstream o, e;
    EXPECT_EQ(dispatch({"train", cfg, s.root() / "out", std::nullopt, std::nullopt}, o, e), kExitConfigError);
    EXPECT_NE(e.str().find(":2:"), std::string::npos) << e.str();
    EXPECT_EQ(run("train", s.root() / "missing.json", s.root() / "out"), kExitConfigError);
}

TEST(Cli, MismatchedModelIsAConfigError) {
    Scratch s("model_mismatch");
    nlohmann::json doc = nlohmann::json::parse(kTiny);
    const fs::path model = s.write("model.json", R"({"n": 2, "m": 1,
        "u_ansatz": {"n_qubits": 2, "n_params": 0, "gates": []},
        "v_ansatz": {"n_qubits": 2, "n_params": 0, "gates": []}, "theta": []})");
    doc["model"] = model.string();
    const fs::path cfg = s.write("mismatch.json", doc.dump(2));
    EXPECT_EQ(run("compress", cfg, s.root() / "out"), kExitConfigError);
}

TEST(Cli, DivergenceExitsThreeWithDiagnostic) {
    Scratch s("numerical_error");
    nlohmann::json doc = nlohmann::json::parse(kTiny);
    doc["train"]["optimizer"] = {{"kind", "adam"}, {"lr", 1.5e308}};
    doc["train"]["tolerance"] = 0.0;
    const fs::path cfg = s.write("diverge.json", doc.dump(2));
    EXPECT_EQ(run("train", cfg, s.root() / "out"), kExitNumericalError);
    const auto err = nlohmann::json::parse(slurp(s.root() / "out" / "error.json"));
    EXPECT_EQ(err["kind"], "numerical");
    EXPECT_NE(err["message"].get<std::string>().find("diverged"), std::string::npos);
}

TEST(Cli, BinaryParsesFlags) {
    Scratch s("binary");
    const std::string exe = CHANNELPRESS_CLI_PATH;
    const std::string ok = exe + " bound --config " + (kSource / "configs" / "depolarizing.json").string() +
                           " --out " + (s.root() / "o").string() + " > /dev/null";
    EXPECT_EQ(WEXITSTATUS(std::system(ok.c_str())), 0);
    const std::string missing = exe + " bound --out " + (s.root() / "o").string() + " > /dev/null 2>&1";
    EXPECT_NE(WEXITSTATUS(std::system(missing.c_str())), 0);
}

TEST(Cli, ReportsIndependentOfThreadCount) {
    Scratch s("threads");
    const fs::path cfg = s.write("tiny.json", kTiny);
    const std::string exe = CHANNELPRESS_CLI_PATH;
    for (const char* threads : {"1", "4"}) {
        const std::string cmd = std::string("CHANNELPRESS_THREADS=") + threads + " " + exe + " train --config " +
                                cfg.string() + " --out " + (s.root() / threads).string() + " > /dev/null";
        ASSERT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
    }
    EXPECT_EQ(slurp(s.root() / "1" / "report.json"), slurp(s.root() / "4" / "report.json"));
    EXPECT_EQ(slurp(s.root() / "1" / "model.json"), slurp(s.root() / "4" / "model.json"));
}
