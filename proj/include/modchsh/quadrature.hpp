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

// Quadrature rules for densities on a periodic axis.
//
// A packet's density on one modular axis is a Gaussian wrapped onto
// [0, period). The coefficient functions integrated against it jump at the
// period boundary, so rules are Gauss-Legendre panels that never straddle a
// multiple of the period: narrow packets are integrated unfolded over
// center ± kTailStds standard deviations, wide packets over the closed period
// with the image-summed density.

#include <vector>

namespace modchsh::quad {

/// Nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n). Results are cached.
const GaussLegendre& gauss_legendre(int n);

inline constexpr double kTailStds = 9.0;

/// Node positions in [0, period) with weights that already include the
/// normalized density, so sum(weights) == 1 and ∫ρ g ≈ Σ w_i g(x_i).
struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Rule for a Gaussian with standard deviation `std_dev` wrapped onto
/// [0, period). `resolution` is the number of Gauss-Legendre nodes per panel
/// (the folded wide-packet rule uses 2 * resolution over the whole period).
/// std_dev == 0 gives a single node at `center` (point mass).
AxisRule wrapped_gaussian_rule(double center, double std_dev, double period, int resolution);

/// Wrapped normal density on [0, period), normalized to integrate to one.
/// Image terms |n| <= ceil(8 std / period) + 2 are summed.
double wrapped_normal_pdf(double x, double center, double std_dev, double period);

}  // namespace modchsh::quad
