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

#include "modchsh/wrapped_density.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "modchsh/quadrature.hpp"

namespace modchsh::modular {
namespace {

constexpr double kMassTol = 1e-10;

void require_frame(const WrappedDensity& d, const ModularFrame& frame) {
    if (std::abs(d.ell() - frame.ell()) > 1e-12 * frame.ell()) {
        throw std::invalid_argument("WrappedDensity: sampled with a different ell than the frame");
    }
}

}  // namespace

void WrappedDensity::validate() const {
    if (points_ == 0) throw std::invalid_argument("WrappedDensity: empty grid");
    const std::size_t expected = joint_ ? points_ * points_ : points_;
    if (values_.size() != expected) throw std::invalid_argument("WrappedDensity: wrong number of samples");
    for (double v : values_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("WrappedDensity: densities must be finite and nonnegative");
        }
    }
    const double m = mass();
    if (std::abs(m - 1.0) > kMassTol) {
        throw std::invalid_argument("WrappedDensity: not normalized (mass " + std::to_string(m) + ")");
    }
}

double WrappedDensity::mass() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    const double area = joint_ ? cell() * cell() : cell();
    return sum * area;
}

WrappedDensity WrappedDensity::single(std::vector<double> values, const ModularFrame& frame) {
    const std::size_t n = values.size();
    WrappedDensity d(std::move(values), n, frame.ell(), false);
    d.validate();
    return d;
}

WrappedDensity WrappedDensity::joint(std::vector<double> values, std::size_t points, const ModularFrame& frame) {
    WrappedDensity d(std::move(values), points, frame.ell(), true);
    d.validate();
    return d;
}

WrappedDensity WrappedDensity::wrapped_normal(double center, double std_dev, std::size_t points,
                                              const ModularFrame& frame) {
    if (points == 0) throw std::invalid_argument("WrappedDensity: empty grid");
    const double ell = frame.ell();
    std::vector<double> v(points);
    double sum = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        v[k] = quad::wrapped_normal_pdf(ell * static_cast<double>(k) / static_cast<double>(points), center, std_dev, ell);
        sum += v[k];
    }
    const double cell = ell / static_cast<double>(points);
    for (double& x : v) x /= sum * cell;
    return single(std::move(v), frame);
}

WrappedDensity WrappedDensity::uniform(std::size_t points, const ModularFrame& frame) {
    return single(std::vector<double>(points, 1.0 / frame.ell()), frame);
}

WrappedDensity WrappedDensity::spike(double x, std::size_t points, const ModularFrame& frame) {
    if (points == 0) throw std::invalid_argument("WrappedDensity: empty grid");
    const double cell = frame.ell() / static_cast<double>(points);
    const double xbar = wrap_position(x, frame).modular;
    auto k = static_cast<std::size_t>(std::llround(xbar / cell)) % points;
    std::vector<double> v(points, 0.0);
    v[k] = 1.0 / cell;
    return single(std::move(v), frame);
}

WrappedDensity WrappedDensity::product(const WrappedDensity& a, const WrappedDensity& b) {
    if (a.is_joint() || b.is_joint() || a.points() != b.points() || a.ell() != b.ell()) {
        throw std::invalid_argument("WrappedDensity::product: need two single-party densities on the same grid");
    }
    const std::size_t n = a.points();
    std::vector<double> v(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) v[i * n + j] = a.values()[i] * b.values()[j];
    }
    WrappedDensity d(std::move(v), n, a.ell(), true);
    d.validate();
    return d;
}

WrappedDensity WrappedDensity::diagonal(const WrappedDensity& q) {
    if (q.is_joint()) throw std::invalid_argument("WrappedDensity::diagonal: need a single-party density");
    const std::size_t n = q.points();
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = q.values()[i] / q.cell();
    WrappedDensity d(std::move(v), n, q.ell(), true);
    d.validate();
    return d;
}

std::complex<double> position_phase_expectation(const WrappedDensity& density, const ModularFrame& frame) {
    if (density.is_joint()) throw std::invalid_argument("position_phase_expectation: single-party density required");
    require_frame(density, frame);
    std::complex<double> acc = 0.0;
    const double k = 2.0 * std::numbers::pi / frame.ell();
    for (std::size_t i = 0; i < density.points(); ++i) {
        acc += density.values()[i] * std::polar(1.0, k * density.node(i));
    }
    return acc * density.cell();
}

double expectation_from_wrapped_density(const WrappedDensity& density, const ModularFrame& frame) {
    if (density.is_joint()) {
        throw std::invalid_argument("expectation_from_wrapped_density: single-party density required");
    }
    require_frame(density, frame);
    const double k = 2.0 * std::numbers::pi / frame.ell();
    double acc = 0.0;
    for (std::size_t i = 0; i < density.points(); ++i) acc += density.values()[i] * std::cos(k * density.node(i));
    return acc * density.cell();
}

double correlation_from_joint_wrapped_density(const WrappedDensity& joint, const ModularFrame& frame) {
    if (!joint.is_joint()) {
        throw std::invalid_argument("correlation_from_joint_wrapped_density: joint density required");
    }
    require_frame(joint, frame);
    const std::size_t n = joint.points();
    const double k = 2.0 * std::numbers::pi / frame.ell();
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = std::cos(k * joint.node(i));
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) acc += joint.values()[i * n + j] * c[i] * c[j];
    }
    return acc * joint.cell() * joint.cell();
}

}  // namespace modchsh::modular
