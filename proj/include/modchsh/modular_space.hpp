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

// Modular-variables engine.
//
// Positions and momenta are split as x = x̄ + Nℓ, p = p̄ + M h/ℓ with ħ = 1,
// h = 2π. Packets and sweep grids are expressed as fractions of their
// periods (x̄/ℓ and p̄/(h/ℓ)); ModularFrame converts physical values at the
// boundary, so none of the kernels below depend on ℓ.
//
// Width convention: a packet's σ is the width of the amplitude
// f ∝ exp(-(x̄ - a)²/(2σ²)), so the probability density |f|² has standard
// deviation σ/√2. On x̄ the density is wrapped with period ℓ/2, on p̄ with
// period h/ℓ. σ = 0 is the point-mass limit.

#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace modchsh::modular {

using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Vector4 = Eigen::Vector4cd;

inline constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
inline constexpr double kLocalBound = 2.0;

class ModularFrame {
public:
    static constexpr double hbar = 1.0;
    static constexpr double h = 2.0 * std::numbers::pi;

    explicit ModularFrame(double ell = 1.0);

    double ell() const { return ell_; }
    double momentum_period() const { return h / ell_; }

    double x_fraction(double x) const { return x / ell_; }
    double p_fraction(double p) const { return p / momentum_period(); }
    double x_from_fraction(double f) const { return f * ell_; }
    double p_from_fraction(double f) const { return f * momentum_period(); }

private:
    double ell_;
};

struct WrappedCoordinate {
    double modular;      // in [0, period)
    std::int64_t index;  // N or M
};

/// x = x̄ + n ℓ with x̄ in [0, ℓ).
WrappedCoordinate wrap_position(double x, const ModularFrame& frame);
/// p = p̄ + m h/ℓ with p̄ in [0, h/ℓ).
WrappedCoordinate wrap_momentum(double p, const ModularFrame& frame);

/// Joint eigenvalue pair of the modular eigenstate |{x̄, p̄}⟩ (physical units).
class ModularPoint {
public:
    static ModularPoint make(double xbar, double pbar, const ModularFrame& frame);

    double xbar() const { return xbar_; }
    double pbar() const { return pbar_; }

private:
    ModularPoint(double xbar, double pbar) : xbar_(xbar), pbar_(pbar) {}
    double xbar_;
    double pbar_;
};

enum class Sign { plus, minus };

/// Local 2x2 blocks in the ordered basis (|{x̄,p̄}⟩, |{x̄+ℓ/2,p̄}⟩):
/// sz = diag(1, -1), sy = [[0, -i], [i, 0]].
struct SigmaBlocks {
    Matrix2 sz;
    Matrix2 sy;
};
SigmaBlocks sigma_blocks();

/// Weight of the φ = 0 setting at modular position x̄ = x_frac·ℓ:
/// cos(2π x̄/ℓ).
double weight_zero(double x_frac);
/// Weight of the φ = π/2 setting: cos(2π x̄/ℓ - p̄ℓ/(2ħ)) with
/// p̄ = p_frac·h/ℓ, i.e. cos(2π x_frac - π p_frac).
double weight_half_pi(double x_frac, double p_frac);

/// Pointwise Bell operator
///   c_a c_b sz⊗sz + c_a d_b sz⊗sy + d_a c_b sy⊗sz - d_a d_b sy⊗sy
/// in the basis |{x̄_a + iℓ/2}⟩|{x̄_b + jℓ/2}⟩, ordering (00, 01, 10, 11).
struct BellBlock {
    ModularPoint point_a;
    ModularPoint point_b;
    Matrix4 matrix;
    double c_a;
    double d_a;
    double c_b;
    double d_b;

    /// Ascending.
    Eigen::Vector4d eigenvalues() const;
};

/// Both points must have x̄ in [0, ℓ/2).
BellBlock bell_block(const ModularPoint& point_a, const ModularPoint& point_b, const ModularFrame& frame);

/// Eigenvectors of the origin Bell block for eigenvalues ±2√2:
/// (1, ±i(√2∓1), ±i(√2∓1), 1) / (2 (2∓√2)^{1/2}).
Vector4 psi_amplitudes(Sign sign);

/// ⟨ψ|σ⊗σ'|ψ⟩ for the four setting products of a fixed two-branch state.
struct BranchContractions {
    double zz;
    double zy;
    double yz;
    double yy;
};
BranchContractions branch_contractions(const Vector4& psi);

/// Wrapped-Gaussian modular wavepacket. All four parameters are fractions:
/// a_x, σ_x of ℓ (a_x in [0, 1/2)); a_p, σ_p of h/ℓ (a_p in [0, 1)).
struct ModularWavepacket {
    double ax = 0.0;
    double ap = 0.0;
    double sx = 0.0;
    double sp = 0.0;

    /// Validates the ranges; throws std::invalid_argument.
    static ModularWavepacket make(double ax, double ap, double sx, double sp);

    ModularWavepacket with_ax(double new_ax) const { return make(new_ax, ap, sx, sp); }
    ModularWavepacket with_sx(double new_sx) const { return make(ax, ap, new_sx, sp); }

    double x_density_std() const { return sx / std::numbers::sqrt2; }
    double p_density_std() const { return sp / std::numbers::sqrt2; }

    bool operator==(const ModularWavepacket&) const = default;
};

inline constexpr double kHalfPeriodX = 0.5;
inline constexpr double kPeriodP = 1.0;

/// Normalized |f|² at a physical modular point, per unit x̄ per unit p̄, on
/// the support [0, ℓ/2) × [0, h/ℓ). Undefined (throws) on point-mass axes.
double wrapped_gaussian_density(const ModularWavepacket& packet, const ModularPoint& point,
                                const ModularFrame& frame);

/// Per-party integrals of the two setting weights against |f|²:
///   c = ∫ρ cos(2πx̄/ℓ),   d = ∫ρ cos(2πx̄/ℓ - p̄ℓ/(2ħ)).
struct PartyMoments {
    double c;
    double d;
};
PartyMoments party_moments(const ModularWavepacket& packet, int resolution);

inline constexpr int kDefaultResolution = 64;
inline constexpr double kConvergenceTol = 1e-6;
inline constexpr int kMaxBruteForceResolution = 48;

/// ⟨B̂⟩ for the state ∫∫ f_a f_b |ψ₊⟩ at a single resolution, via the
/// factorized form  Σ κ_{st} W_a^s W_b^t  (no convergence check).
double bell_expectation_at(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                           int resolution);

struct BellEstimate {
    double value;      // at 2 * resolution
    double delta;      // |value(2n) - value(n)|
    int resolution;
    bool converged;
};
BellEstimate estimate_bell(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                           int resolution = kDefaultResolution, double tolerance = kConvergenceTol);

/// Throws NumericalFailure when resolution doubling moves the value by more
/// than `tolerance`.
double bell_expectation(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                        int resolution = kDefaultResolution, double tolerance = kConvergenceTol);

/// Full 4D tensor-grid quadrature of |f_a|²|f_b|² ψ₊† B(x̄_a,p̄_a,x̄_b,p̄_b) ψ₊,
/// building the Bell block at every node. Rejects resolution above
/// `max_resolution`.
double bell_expectation_bruteforce(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                                   int resolution, int max_resolution = kMaxBruteForceResolution);

/// 2√2 cos²(2π a_x̄/ℓ), the point-mass value at a_p̄ = 0.
double delta_limit_bell(double a_xbar, const ModularFrame& frame);

struct SweepRow {
    double ax;  // fraction of ℓ
    double value;
    double delta;
    bool converged;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    ModularWavepacket packet_template;
    int resolution;

    double max_value() const;
    double max_delta() const;
    std::size_t converged_rows() const;
};

/// Cell midpoints of `points` equal cells on [0, 1/2) (fractions of ℓ).
std::vector<double> midpoint_grid(int points);

/// Evaluates ⟨B̂⟩ with both parties carrying `packet_template` moved to each
/// a_x in `ax_grid`. Rows keep grid order; non-convergent rows are flagged,
/// not thrown. `workers` > 1 splits rows across threads with identical results.
SweepResult sweep_ax(const ModularWavepacket& packet_template, const std::vector<double>& ax_grid,
                     int resolution = kDefaultResolution, unsigned workers = 1);

struct InnerMax {
    double sx;
    double ax;
    double value;
};

/// Maximum of ⟨B̂⟩ over a_x for fixed widths: coarse midpoint grid, then
/// golden-section refinement around the best cell.
InnerMax max_over_ax(const ModularWavepacket& packet_template, int resolution, int coarse_points = 64);

struct ThresholdOptions {
    int coarse_points = 64;
    double tolerance = 1e-5;  // on σ_x, fraction of ℓ
    int max_iterations = 200;
};

struct ThresholdResult {
    double sigma_star;
    double lo;  // final bracket
    double hi;
    int iterations;
    std::vector<InnerMax> evaluations;
};

/// Bisection on σ_x for max_a ⟨B̂⟩ = 2. Throws std::invalid_argument for an
/// empty/inverted bracket and NumericalFailure when the bracket holds no
/// sign change.
ThresholdResult violation_threshold(const ModularWavepacket& packet_template, double sx_lo, double sx_hi,
                                    int resolution = kDefaultResolution, const ThresholdOptions& options = {});

/// Measurement settings with closed modular forms.
enum class Setting { zero, half_pi };

/// φ ∈ {0, π/2} within 1e-12; anything else throws std::invalid_argument.
Setting setting_from_angle(double phi);
double setting_angle(Setting s);

/// Weight W^φ of a party: c for φ = 0, d for φ = π/2.
double setting_weight(const PartyMoments& m, Setting s);
/// The local 2x2 block σ_z (φ = 0) or σ_y (φ = π/2).
Matrix2 setting_block(Setting s);

/// Branch density of a single party over (|{x̄,p̄}⟩, |{x̄+ℓ/2,p̄}⟩).
/// |0⟩⟨0| is the state |f⟩ = ∫ f |{x̄,p̄}⟩.
Matrix2 branch_f();

/// ⟨Â_φ⟩ = W^φ · tr(ρ_branch σ_φ) for a single party.
double single_party_expectation(const ModularWavepacket& packet, Setting setting, const Matrix2& branch,
                                int resolution = kDefaultResolution);

/// Reduced branch density of party 0 (a) or 1 (b) of a two-branch state.
Matrix2 reduced_branch(const Vector4& psi, int party);

}  // namespace modchsh::modular
