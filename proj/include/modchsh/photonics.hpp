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

// Photonic realization of the modular-variables test: a diffraction grating
// with a Gaussian envelope prepares the modular wavepacket, a Mach-Zehnder
// interferometer realizes the binary POVM by photon counting, and pairs of
// interferometers give coincidence tables for the four CHSH setting pairs.

#include <array>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "modchsh/chsh_core.hpp"
#include "modchsh/modular_space.hpp"

namespace modchsh::photonics {

using modular::ModularFrame;
using modular::ModularWavepacket;
using modular::Setting;

inline constexpr double kTransmissionTail = 1e-14;
inline constexpr double kValidityRatioWarn = 0.2;
/// Conditional success probability of the polarization-to-transverse swap.
inline constexpr double kSwapSuccessProbability = 0.5;

/// Fourier coefficients c_m ∝ exp(-m²κ²/2), m = -m_max..m_max (index m + m_max),
/// normalized so Σ|c_m|² = 1. Throws std::invalid_argument when the discarded
/// tail weight is not below kTransmissionTail.
std::vector<double> transmission_coeffs(double kappa, int m_max);

/// Smallest m_max accepted by transmission_coeffs.
int transmission_order(double kappa);

struct GratingSpec {
    double L = 1.0;                  // slit distance
    double kappa = 0.2 * std::numbers::pi;
    double sigma = 10.0;             // envelope width
    double transverse_shift = 0.0;   // grating offset; sets a_x̄
    double slm_phase_slope = 0.0;    // imprinted momentum; sets a_p̄

    /// Throws std::invalid_argument on nonpositive L, kappa or sigma.
    void validate() const;
};

struct ModularMapping {
    ModularFrame frame;         // ℓ = 2L
    ModularWavepacket packet;   // fractions of the periods
    double sigma_xbar;          // κ²L²/(2π)²
    double sigma_pbar;          // h²/(2πσ)²
    double validity_ratio;      // L/σ
    bool warning;               // L/σ > kValidityRatioWarn
};

/// Tooth and envelope widths come out of the comb as variances; the packet
/// is built from their square roots (amplitude widths κL/(2π) and ħ/σ).
ModularMapping grating_to_modular(const GratingSpec& spec);

/// Ψ(x) = T(x - shift) f_G(x) on an ascending grid, normalized so that the
/// trapezoid integral of |Ψ|² is one. The grid must cover ±5σ and its largest
/// spacing must be below a quarter of the tooth width κL/(2π).
std::vector<std::complex<double>> grating_wavefunction(const GratingSpec& spec, const std::vector<double>& x_grid);

/// Uniform grid with spacing L/nodes_per_period covering ±(5σ + L).
std::vector<double> grating_grid(const GratingSpec& spec, int nodes_per_period);

struct WrapComparison {
    std::vector<double> xbar;           // fold nodes on [0, L)
    std::vector<double> folded_density; // |Ψ|² summed over periods L
    std::vector<double> model_density;  // packet density on the same nodes
    double density_gap;     // sup |folded - model| / sup model
    double amplitude_gap;   // L2 distance of Ψ from T(x)·f_G(nℓ), relative
};

/// Samples the grating wavefunction and compares it with the mapped packet.
WrapComparison wrap_and_compare(const GratingSpec& spec, int nodes_per_period = 256);

/// Translates the modular-momentum center by `a_pbar` (fraction of h/ℓ,
/// in [0, 1)); the new center is wrapped onto [0, 1).
ModularWavepacket apply_slm_phase(const ModularWavepacket& packet, double a_pbar);

struct MachZehnderOutcome {
    double p_plus;
    double p_minus;
    double phi;
};

/// p± = (1 ± ⟨Â_φ⟩)/2 for a single photon in `branch` (see
/// modular::single_party_expectation). φ must be 0 or π/2.
MachZehnderOutcome mach_zehnder_probs(const ModularWavepacket& packet, double phi,
                                      const modular::Matrix2& branch = modular::branch_f(),
                                      int resolution = modular::kDefaultResolution);

struct CoincidenceTable {
    double phi_a;
    double phi_b;
    chsh::JointProbs probs;
};

/// Joint photon-count probabilities for the pair state ∫∫ f_a f_b |ψ₊⟩ at
/// settings (φ, φ'). Built from the joint-outcome layer with effective
/// observables W^φ σ_φ on the branch qubits.
CoincidenceTable coincidence_povm_probs(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                                        double phi, double phi_prime,
                                        int resolution = modular::kDefaultResolution);

/// Setting pairs in CHSH order: (0,0), (0,π/2), (π/2,0), (π/2,π/2).
using ChshTables = std::array<CoincidenceTable, 4>;
ChshTables chsh_tables(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                       int resolution = modular::kDefaultResolution);

/// E₁₁ + E₁₂ + E₂₁ - E₂₂ from the four tables.
double chsh_from_tables(const ChshTables& tables);

struct CoincidenceCounts {
    double phi_a;
    double phi_b;
    chsh::CountsTable counts;
};
using ChshCounts = std::array<CoincidenceCounts, 4>;

/// `shots` photon pairs per setting pair; setting pair i draws from counter
/// stream i, so the result depends only on (tables, shots, seed).
ChshCounts sample_coincidences(const ChshTables& tables, std::uint64_t shots, std::uint64_t seed);

struct EmpiricalChsh {
    double value;
    double std_error;  // sqrt(Σ (1 - E_i²)/N_i)
};
EmpiricalChsh empirical_chsh(const ChshCounts& counts);

/// Polarization state of the pair in the basis (HH, HV, VH, VV).
std::array<std::complex<double>, 4> polarization_coeffs(modular::Sign sign);

struct PreparedPair {
    ModularWavepacket packet_a;
    ModularWavepacket packet_b;
    std::array<std::complex<double>, 4> amplitudes;
    double success_probability;
};
/// Target state after swapping the polarization entanglement onto |f⟩, |f̄⟩.
PreparedPair prepare_pair(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b);

}  // namespace modchsh::photonics
