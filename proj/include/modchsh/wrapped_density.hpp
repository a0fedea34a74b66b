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

#pragma once

#include <complex>
#include <vector>

#include "modchsh/modular_space.hpp"

namespace modchsh::modular {

/// Sampled probability density of the modular position x̄ on [0, ℓ) (one
/// party) or of (x̄, ȳ) on [0, ℓ)² (two parties), on a uniform periodic grid
/// of `points` nodes per axis with node k at k·ℓ/points. Quadrature weights
/// are the cell widths, which is the trapezoid rule on a periodic axis.
class WrappedDensity {
public:
    /// Validates nonnegativity and unit mass (1e-10); throws std::invalid_argument.
    static WrappedDensity single(std::vector<double> values, const ModularFrame& frame);
    /// Row-major values[i * points + j] = p(x̄_i, ȳ_j).
    static WrappedDensity joint(std::vector<double> values, std::size_t points, const ModularFrame& frame);

    /// Wrapped normal with density standard deviation `std_dev` (physical).
    static WrappedDensity wrapped_normal(double center, double std_dev, std::size_t points,
                                         const ModularFrame& frame);
    static WrappedDensity uniform(std::size_t points, const ModularFrame& frame);
    /// All mass on the grid node nearest to `x`.
    static WrappedDensity spike(double x, std::size_t points, const ModularFrame& frame);

    static WrappedDensity product(const WrappedDensity& a, const WrappedDensity& b);
    /// p(x̄, ȳ) = q(x̄) δ(x̄ - ȳ) on the grid.
    static WrappedDensity diagonal(const WrappedDensity& q);

    bool is_joint() const { return joint_; }
    std::size_t points() const { return points_; }
    double ell() const { return ell_; }
    double cell() const { return ell_ / static_cast<double>(points_); }
    double node(std::size_t k) const { return cell() * static_cast<double>(k); }
    const std::vector<double>& values() const { return values_; }
    double mass() const;

private:
    WrappedDensity(std::vector<double> values, std::size_t points, double ell, bool joint)
        : values_(std::move(values)), points_(points), ell_(ell), joint_(joint) {}
    void validate() const;

    std::vector<double> values_;
    std::size_t points_;
    double ell_;
    bool joint_;
};

/// ⟨Â⟩ = ∫₀^ℓ cos(2πx̄/ℓ) p(x̄) dx̄.
double expectation_from_wrapped_density(const WrappedDensity& density, const ModularFrame& frame);

/// ⟨ÂB̂⟩ = ∫∫ cos(2πx̄/ℓ) cos(2πȳ/ℓ) p(x̄, ȳ).
double correlation_from_joint_wrapped_density(const WrappedDensity& joint, const ModularFrame& frame);

/// ⟨exp(i 2π x̂/ℓ)⟩; its real part is expectation_from_wrapped_density.
std::complex<double> position_phase_expectation(const WrappedDensity& density, const ModularFrame& frame);

}  // namespace modchsh::modular
