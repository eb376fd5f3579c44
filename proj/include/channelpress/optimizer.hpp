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

#include <deque>
#include <functional>
#include <memory>
#include <variant>

#include <Eigen/Dense>

namespace channelpress {

struct GradientDescentConfig {
    double lr = 0.1;
};

struct AdamConfig {
    double lr = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Limited-memory BFGS with a strong-Wolfe line search.
struct LbfgsConfig {
    int history = 10;
    double c1 = 1e-4;  // sufficient decrease
    double c2 = 0.9;   // curvature
    int max_line_search = 20;
};

using OptimizerConfig = std::variant<LbfgsConfig, AdamConfig, GradientDescentConfig>;

/// Returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct StepResult {
    bool moved = true;    // false when no acceptable step could be found
    int evaluations = 0;  // objective calls made during the step
};

/// One optimizer iteration at a time; `x`, `fx` and `gx` hold the current
/// point, its value and gradient, and are updated in place.
class Optimizer {
   public:
    virtual ~Optimizer() = default;
    virtual StepResult step(Eigen::VectorXd& x, double& fx, Eigen::VectorXd& gx, const Objective& f) = 0;
};

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& config);

class GradientDescent final : public Optimizer {
   public:
    explicit GradientDescent(GradientDescentConfig config) : config_(config) {}
    StepResult step(Eigen::VectorXd& x, double& fx, Eigen::VectorXd& gx, const Objective& f) override;

   private:
    GradientDescentConfig config_;
};

class Adam final : public Optimizer {
   public:
    explicit Adam(AdamConfig config) : config_(config) {}
    StepResult step(Eigen::VectorXd& x, double& fx, Eigen::VectorXd& gx, const Objective& f) override;

   private:
    AdamConfig config_;
    Eigen::VectorXd m_, v_;
    int t_ = 0;
};

class Lbfgs final : public Optimizer {
   public:
    explicit Lbfgs(LbfgsConfig config) : config_(config) {}
    StepResult step(Eigen::VectorXd& x, double& fx, Eigen::VectorXd& gx, const Objective& f) override;

   private:
    Eigen::VectorXd direction(const Eigen::VectorXd& g) const;

    LbfgsConfig config_;
    std::deque<Eigen::VectorXd> s_, y_;
    bool first_ = true;
};

struct LineSearchResult {
    bool ok = false;
    double alpha = 0.0;
    double f = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd g;
    int evaluations = 0;
};

/// Strong-Wolfe line search along descent direction `d` (bracketing phase
/// followed by zoom with safeguarded cubic interpolation).
LineSearchResult strong_wolfe_search(const Objective& f, const Eigen::VectorXd& x0, double f0,
                                     const Eigen::VectorXd& g0, const Eigen::VectorXd& d, double alpha_init,
                                     const LbfgsConfig& config);

}  // namespace channelpress
