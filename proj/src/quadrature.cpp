// Copyright 2026 The modchsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "modchsh/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace modchsh::quad {
namespace {

GaussLegendre compute_gauss_legendre(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // One more derivative evaluation at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double wrap(double x, double period) {
    double r = x - std::floor(x / period) * period;
    if (r >= period) r -= period;
    if (r < 0.0) r = 0.0;
    return r;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        if (n == 1) {
            slot = std::make_unique<GaussLegendre>(GaussLegendre{{0.0}, {2.0}});
        } else {
            slot = std::make_unique<GaussLegendre>(compute_gauss_legendre(n));
        }
    }
    return *slot;
}

double wrapped_normal_pdf(double x, double center, double std_dev, double period) {
    if (!(std_dev > 0.0)) throw std::domain_error("wrapped_normal_pdf: std_dev must be positive");
    const int images = static_cast<int>(std::ceil(8.0 * std_dev / period)) + 2;
    const double norm = 1.0 / (std_dev * std::sqrt(2.0 * std::numbers::pi));
    double sum = 0.0;
    for (int n = -images; n <= images; ++n) {
        const double z = (x - center + n * period) / std_dev;
        sum += std::exp(-0.5 * z * z);
    }
    return norm * sum;
}

AxisRule wrapped_gaussian_rule(double center, double std_dev, double period, int resolution) {
    if (!(period > 0.0)) throw std::invalid_argument("wrapped_gaussian_rule: period must be positive");
    if (resolution < 1) throw std::invalid_argument("wrapped_gaussian_rule: resolution must be >= 1");
    if (std_dev < 0.0) throw std::invalid_argument("wrapped_gaussian_rule: negative width");

    AxisRule rule;
    if (std_dev == 0.0) {
        rule.nodes = {wrap(center, period)};
        rule.weights = {1.0};
        return rule;
    }

    const double lo = center - kTailStds * std_dev;
    const double hi = center + kTailStds * std_dev;
    if (hi - lo >= period) {
        const GaussLegendre& gl = gauss_legendre(2 * resolution);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double x = 0.5 * period * (gl.nodes[i] + 1.0);
            rule.nodes.push_back(x);
            rule.weights.push_back(0.5 * period * gl.weights[i] * wrapped_normal_pdf(x, center, std_dev, period));
        }
    } else {
        std::vector<double> breaks{lo};
        for (double k = std::floor(lo / period) + 1.0; k * period < hi; k += 1.0) breaks.push_back(k * period);
        breaks.push_back(hi);
        const GaussLegendre& gl = gauss_legendre(resolution);
        for (std::size_t panel = 0; panel + 1 < breaks.size(); ++panel) {
            const double a = breaks[panel];
            const double b = breaks[panel + 1];
            if (b - a <= 0.0) continue;
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                const double x = 0.5 * (b - a) * gl.nodes[i] + 0.5 * (a + b);
                const double z = (x - center) / std_dev;
                rule.nodes.push_back(wrap(x, period));
                rule.weights.push_back(0.5 * (b - a) * gl.weights[i] * std::exp(-0.5 * z * z));
            }
        }
    }

    double total = 0.0;
    for (double w : rule.weights) total += w;
    for (double& w : rule.weights) w /= total;
    return rule;
}

}  // namespace modchsh::quad
