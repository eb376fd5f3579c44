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

#include "channelpress/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace channelpress {

namespace {

// Minimizer of the cubic matching values and slopes at a and b, or the
// midpoint when the cubic has no usable minimizer.
double cubic_minimizer(double a, double fa, double ga, double b, double fb, double gb) {
    const double d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - ga * gb;
    if (!(disc >= 0.0)) return 0.5 * (a + b);
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = gb - ga + 2.0 * d2;
    if (denom == 0.0) return 0.5 * (a + b);
    const double t = b - (b - a) * (gb + d2 - d1) / denom;
    return std::isfinite(t) ? t : 0.5 * (a + b);
}

struct Sample {
    double alpha;
    double f;
    double slope;
    Eigen::VectorXd x;
    Eigen::VectorXd g;
};

}  // namespace

LineSearchResult strong_wolfe_search(const Objective& f, const Eigen::VectorXd& x0, double f0,
                                     const Eigen::VectorXd& g0, const Eigen::VectorXd& d, double alpha_init,
                                     const LbfgsConfig& config) {
    LineSearchResult result;
    const double slope0 = g0.dot(d);
    if (!(slope0 < 0.0)) return result;

    auto evaluate = [&](double alpha) {
        Sample s;
        s.alpha = alpha;
        s.x = x0 + alpha * d;
        s.g.resize(x0.size());
        s.f = f(s.x, s.g);
        s.slope = s.g.dot(d);
        ++result.evaluations;
        return s;
    };
    auto accept = [&](Sample& s) {
        result.ok = true;
        result.alpha = s.alpha;
        result.f = s.f;
        result.x = std::move(s.x);
        result.g = std::move(s.g);
        return result;
    };
    auto armijo = [&](const Sample& s) { return s.f <= f0 + config.c1 * s.alpha * slope0; };
    auto curvature = [&](const Sample& s) { return std::abs(s.slope) <= -config.c2 * slope0; };

    // Best point with sufficient decrease seen so far; used as a fallback
    // when the evaluation budget runs out before strong Wolfe holds.
    std::optional<Sample> best;
    auto remember = [&](const Sample& s) {
        if (std::isfinite(s.f) && armijo(s) && (!best || s.f < best->f)) best = s;
    };

    auto zoom = [&](Sample lo, Sample hi) -> LineSearchResult {
        while (result.evaluations < config.max_line_search) {
            const double left = std::min(lo.alpha, hi.alpha), right = std::max(lo.alpha, hi.alpha);
            const double width = right - left;
            if (width <= 1e-14 * std::max(1.0, right)) break;
            double alpha = cubic_minimizer(lo.alpha, lo.f, lo.slope, hi.alpha, hi.f, hi.slope);
            alpha = std::clamp(alpha, left + 0.1 * width, right - 0.1 * width);
            Sample s = evaluate(alpha);
            remember(s);
            if (!std::isfinite(s.f) || !armijo(s) || s.f >= lo.f) {
                hi = std::move(s);
                continue;
            }
            if (curvature(s)) return accept(s);
            if (s.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
            lo = std::move(s);
        }
        if (best) return accept(*best);
        return result;
    };

    Sample prev{0.0, f0, slope0, x0, g0};
    double alpha = alpha_init;
    for (int i = 0; result.evaluations < config.max_line_search; ++i) {
        Sample s = evaluate(alpha);
        remember(s);
        if (!std::isfinite(s.f) || !armijo(s) || (i > 0 && s.f >= prev.f)) return zoom(std::move(prev), std::move(s));
        if (curvature(s)) return accept(s);
        if (s.slope >= 0.0) return zoom(std::move(s), std::move(prev));
        prev = std::move(s);
        alpha *= 2.0;
    }
    if (best) return accept(*best);
    return result;
}

StepResult GradientDescent::step(Eigen::VectorXd& x, double& fx, Eigen::VectorXd& gx, const Objective& f) {
    x -= config_.lr * gx;
    fx = f(x, gx);
    return {true, 1};
}

StepResult Adam::step(Eigen::VectorXd& x, double& fx, Eigen::VectorXd& gx, const Objective& f) {
    if (m_.size() != x.size()) {
        m_ = Eigen::VectorXd::Zero(x.size());
        v_ = Eigen::VectorXd::Zero(x.size());
        t_ = 0;
    }
    ++t_;
    m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * gx;
    v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * gx.cwiseProduct(gx);
    const double bc1 = 1.0 - std::pow(config_.beta1, t_);
    const double bc2 = 1.0 - std::pow(config_.beta2, t_);
    const Eigen::VectorXd m_hat = m_ / bc1;
    const Eigen::VectorXd v_hat = v_ / bc2;
    x -= config_.lr * m_hat.cwiseQuotient((v_hat.cwiseSqrt().array() + config_.eps).matrix());
    fx = f(x, gx);
    return {true, 1};
}

Eigen::VectorXd Lbfgs::direction(const Eigen::VectorXd& g) const {
    // Two-loop recursion.
    Eigen::VectorXd q = -g;
    const size_t k = s_.size();
    std::vector<double> alpha(k), rho(k);
    for (size_t i = k; i-- > 0;) {
        rho[i] = 1.0 / y_[i].dot(s_[i]);
        alpha[i] = rho[i] * s_[i].dot(q);
        q -= alpha[i] * y_[i];
    }
    if (k > 0) q *= s_.back().dot(y_.back()) / y_.back().squaredNorm();
    for (size_t i = 0; i < k; ++i) {
        const double beta = rho[i] * y_[i].dot(q);
        q += (alpha[i] - beta) * s_[i];
    }
    return q;
}

StepResult Lbfgs::step(Eigen::VectorXd& x, double& fx, Eigen::VectorXd& gx, const Objective& f) {
    StepResult out;
    const double gnorm = gx.norm();
    if (gnorm == 0.0) return {false, 0};

    Eigen::VectorXd d = direction(gx);
    if (!(d.dot(gx) < 0.0)) {
        s_.clear();
        y_.clear();
        d = -gx;
    }
    double alpha0 = (first_ || s_.empty()) ? std::min(1.0, 1.0 / gnorm) : 1.0;
    auto search = strong_wolfe_search(f, x, fx, gx, d, alpha0, config_);
    out.evaluations = search.evaluations;
    if (!search.ok && !s_.empty()) {
        // Stale curvature pairs; retry from steepest descent.
        s_.clear();
        y_.clear();
        d = -gx;
        search = strong_wolfe_search(f, x, fx, gx, d, std::min(1.0, 1.0 / gnorm), config_);
        out.evaluations += search.evaluations;
    }
    if (!search.ok) {
        out.moved = false;
        return out;
    }
    first_ = false;
    Eigen::VectorXd s = search.x - x;
    Eigen::VectorXd y = search.g - gx;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
        s_.push_back(std::move(s));
        y_.push_back(std::move(y));
        if (static_cast<int>(s_.size()) > config_.history) {
            s_.pop_front();
            y_.pop_front();
        }
    }
    x = std::move(search.x);
    fx = search.f;
    gx = std::move(search.g);
    return out;
}

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& config) {
    return std::visit(
        [](const auto& c) -> std::unique_ptr<Optimizer> {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, LbfgsConfig>) {
                return std::make_unique<Lbfgs>(c);
            } else if constexpr (std::is_same_v<T, AdamConfig>) {
                return std::make_unique<Adam>(c);
            } else {
                return std::make_unique<GradientDescent>(c);
            }
        },
        config);
}

}  // namespace channelpress
