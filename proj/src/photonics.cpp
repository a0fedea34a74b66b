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

#include "modchsh/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "modchsh/quadrature.hpp"

namespace modchsh::photonics {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Σ_{|m| > m_max} e^{-m²κ²} relative to the full sum.
double tail_weight(double kappa, int m_max) {
    double total = 1.0;
    double tail = 0.0;
    for (int m = 1;; ++m) {
        const double w = 2.0 * std::exp(-static_cast<double>(m) * m * kappa * kappa);
        total += w;
        if (m > m_max) tail += w;
        if (w < 1e-300 || (m > m_max && w < 1e-30 * tail)) break;
    }
    return tail / total;
}

chsh::Observable weighted_block(double weight, Setting s) {
    const modular::Matrix2 m = weight * modular::setting_block(s);
    return chsh::Observable::from_matrix(chsh::Matrix(m));
}

double tooth_width(const GratingSpec& spec) { return spec.kappa * spec.L / (2.0 * kPi); }

double envelope(double x, double sigma) { return std::exp(-x * x / (2.0 * sigma * sigma)) / (sigma * kPi); }

}  // namespace

std::vector<double> transmission_coeffs(double kappa, int m_max) {
    if (!(kappa > 0.0)) throw std::invalid_argument("transmission_coeffs: kappa must be positive");
    if (m_max < 0) throw std::invalid_argument("transmission_coeffs: m_max must be nonnegative");
    const double tail = tail_weight(kappa, m_max);
    if (tail >= kTransmissionTail) {
        throw std::invalid_argument("transmission_coeffs: m_max = " + std::to_string(m_max) +
                                    " leaves tail weight " + std::to_string(tail));
    }
    std::vector<double> c(2 * m_max + 1);
    double norm = 0.0;
    for (int m = -m_max; m <= m_max; ++m) {
        const double v = std::exp(-0.5 * m * m * kappa * kappa);
        c[m + m_max] = v;
        norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : c) v /= norm;
    return c;
}

int transmission_order(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("transmission_order: kappa must be positive");
    int m = 0;
    while (tail_weight(kappa, m) >= kTransmissionTail) ++m;
    return m;
}

void GratingSpec::validate() const {
    if (!(L > 0.0)) throw std::invalid_argument("grating: L must be positive");
    if (!(kappa > 0.0)) throw std::invalid_argument("grating: kappa must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("grating: sigma must be positive");
    if (!std::isfinite(transverse_shift) || !std::isfinite(slm_phase_slope)) {
        throw std::invalid_argument("grating: shift and phase slope must be finite");
    }
}

ModularMapping grating_to_modular(const GratingSpec& spec) {
    spec.validate();
    const ModularFrame frame(2.0 * spec.L);
    const double sigma_xbar = spec.kappa * spec.kappa * spec.L * spec.L / ((2.0 * kPi) * (2.0 * kPi));
    const double sigma_pbar = ModularFrame::h * ModularFrame::h / ((2.0 * kPi * spec.sigma) * (2.0 * kPi * spec.sigma));

    double shift = std::fmod(spec.transverse_shift, spec.L);
    if (shift < 0.0) shift += spec.L;
    double ax = frame.x_fraction(shift);
    if (ax >= modular::kHalfPeriodX) ax = 0.0;
    const double ap = frame.p_fraction(modular::wrap_momentum(spec.slm_phase_slope, frame).modular);

    const double sx = frame.x_fraction(std::sqrt(sigma_xbar));
    const double sp = frame.p_fraction(std::sqrt(sigma_pbar));
    const double ratio = spec.L / spec.sigma;
    return {frame, ModularWavepacket::make(ax, ap >= 1.0 ? 0.0 : ap, sx, sp), sigma_xbar, sigma_pbar, ratio,
            ratio > kValidityRatioWarn};
}

std::vector<cd> grating_wavefunction(const GratingSpec& spec, const std::vector<double>& x_grid) {
    spec.validate();
    if (x_grid.size() < 2) throw std::invalid_argument("grating_wavefunction: grid needs at least two nodes");
    double max_step = 0.0;
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        const double step = x_grid[i] - x_grid[i - 1];
        if (!(step > 0.0)) throw std::invalid_argument("grating_wavefunction: grid must be strictly ascending");
        max_step = std::max(max_step, step);
    }
    if (x_grid.front() > -5.0 * spec.sigma || x_grid.back() < 5.0 * spec.sigma) {
        throw std::invalid_argument("grating_wavefunction: grid must cover +-5 sigma");
    }
    if (max_step >= 0.25 * tooth_width(spec)) {
        throw std::invalid_argument("grating_wavefunction: grid too coarse for the comb teeth");
    }

    const int m_max = transmission_order(spec.kappa);
    const std::vector<double> c = transmission_coeffs(spec.kappa, m_max);
    std::vector<cd> psi(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double y = x_grid[i] - spec.transverse_shift;
        double t = c[m_max];
        for (int m = 1; m <= m_max; ++m) t += 2.0 * c[m_max + m] * std::cos(2.0 * kPi * m * y / spec.L);
        psi[i] = t * envelope(x_grid[i], spec.sigma);
    }

    double norm = 0.0;
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        norm += 0.5 * (std::norm(psi[i]) + std::norm(psi[i - 1])) * (x_grid[i] - x_grid[i - 1]);
    }
    norm = std::sqrt(norm);
    for (cd& v : psi) v /= norm;
    return psi;
}

std::vector<double> grating_grid(const GratingSpec& spec, int nodes_per_period) {
    spec.validate();
    if (nodes_per_period < 1) throw std::invalid_argument("grating_grid: nodes_per_period must be positive");
    const double dx = spec.L / nodes_per_period;
    const auto half = static_cast<long>(std::ceil((5.0 * spec.sigma + spec.L) / dx));
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(2 * half + 1));
    for (long k = -half; k <= half; ++k) x.push_back(static_cast<double>(k) * dx);
    return x;
}

WrapComparison wrap_and_compare(const GratingSpec& spec, int nodes_per_period) {
    const ModularMapping map = grating_to_modular(spec);
    const std::vector<double> x = grating_grid(spec, nodes_per_period);
    const std::vector<cd> psi = grating_wavefunction(spec, x);
    const double dx = spec.L / nodes_per_period;
    const double ell = map.frame.ell();

    WrapComparison out;
    out.folded_density.assign(static_cast<std::size_t>(nodes_per_period), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        long k = std::lround(x[i] / dx) % nodes_per_period;
        if (k < 0) k += nodes_per_period;
        out.folded_density[static_cast<std::size_t>(k)] += std::norm(psi[i]);
    }
    double folded_mass = 0.0;
    for (double v : out.folded_density) folded_mass += v * dx;
    for (double& v : out.folded_density) v /= folded_mass;

    out.xbar.resize(out.folded_density.size());
    out.model_density.resize(out.folded_density.size());
    double sup_model = 0.0;
    double sup_gap = 0.0;
    for (std::size_t k = 0; k < out.xbar.size(); ++k) {
        out.xbar[k] = static_cast<double>(k) * dx;
        out.model_density[k] = quad::wrapped_normal_pdf(out.xbar[k] / ell, map.packet.ax, map.packet.x_density_std(),
                                                        modular::kHalfPeriodX) / ell;
        sup_model = std::max(sup_model, out.model_density[k]);
        sup_gap = std::max(sup_gap, std::abs(out.folded_density[k] - out.model_density[k]));
    }
    out.density_gap = sup_gap / sup_model;

    // x = x̄ + nℓ with x̄ in [0, ℓ); the modular form replaces f_G(x) by f_G(nℓ).
    const int m_max = transmission_order(spec.kappa);
    const std::vector<double> c = transmission_coeffs(spec.kappa, m_max);
    double diff = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double y = x[i] - spec.transverse_shift;
        double t = c[m_max];
        for (int m = 1; m <= m_max; ++m) t += 2.0 * c[m_max + m] * std::cos(2.0 * kPi * m * y / spec.L);
        const double n_ell = ell * std::floor(x[i] / ell);
        const double exact = t * envelope(x[i], spec.sigma);
        const double approx = t * envelope(n_ell, spec.sigma);
        diff += (exact - approx) * (exact - approx);
        total += exact * exact;
    }
    out.amplitude_gap = std::sqrt(diff / total);
    return out;
}

ModularWavepacket apply_slm_phase(const ModularWavepacket& packet, double a_pbar) {
    if (!(a_pbar >= 0.0 && a_pbar < modular::kPeriodP)) {
        throw std::invalid_argument("apply_slm_phase: shift must lie in [0, 1) of the momentum period");
    }
    double ap = packet.ap + a_pbar;
    if (ap >= modular::kPeriodP) ap -= modular::kPeriodP;
    return ModularWavepacket::make(packet.ax, ap, packet.sx, packet.sp);
}

MachZehnderOutcome mach_zehnder_probs(const ModularWavepacket& packet, double phi, const modular::Matrix2& branch,
                                      int resolution) {
    const Setting s = modular::setting_from_angle(phi);
    const double a = modular::single_party_expectation(packet, s, branch, resolution);
    return {0.5 * (1.0 + a), 0.5 * (1.0 - a), modular::setting_angle(s)};
}

CoincidenceTable coincidence_povm_probs(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                                        double phi, double phi_prime, int resolution) {
    const Setting sa = modular::setting_from_angle(phi);
    const Setting sb = modular::setting_from_angle(phi_prime);
    const modular::PartyMoments ma = modular::party_moments(packet_a, resolution);
    const modular::PartyMoments mb = packet_b == packet_a ? ma : modular::party_moments(packet_b, resolution);
    static const chsh::BipartiteState pair =
        chsh::BipartiteState::pure(chsh::Vector(modular::psi_amplitudes(modular::Sign::plus)), 2, 2);
    const chsh::Observable a = weighted_block(modular::setting_weight(ma, sa), sa);
    const chsh::Observable b = weighted_block(modular::setting_weight(mb, sb), sb);
    return {modular::setting_angle(sa), modular::setting_angle(sb), chsh::joint_probs(pair, a, b)};
}

ChshTables chsh_tables(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b, int resolution) {
    const double h = 0.5 * kPi;
    return {coincidence_povm_probs(packet_a, packet_b, 0.0, 0.0, resolution),
            coincidence_povm_probs(packet_a, packet_b, 0.0, h, resolution),
            coincidence_povm_probs(packet_a, packet_b, h, 0.0, resolution),
            coincidence_povm_probs(packet_a, packet_b, h, h, resolution)};
}

double chsh_from_tables(const ChshTables& t) {
    return t[0].probs.correlation() + t[1].probs.correlation() + t[2].probs.correlation() -
           t[3].probs.correlation();
}

ChshCounts sample_coincidences(const ChshTables& tables, std::uint64_t shots, std::uint64_t seed) {
    ChshCounts out{};
    for (std::size_t i = 0; i < tables.size(); ++i) {
        out[i] = {tables[i].phi_a, tables[i].phi_b, chsh::sample_outcomes(tables[i].probs, shots, seed, i)};
    }
    return out;
}

EmpiricalChsh empirical_chsh(const ChshCounts& counts) {
    double value = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double e = counts[i].counts.correlation();
        value += i == 3 ? -e : e;
        var += (1.0 - e * e) / static_cast<double>(counts[i].counts.total());
    }
    return {value, std::sqrt(var)};
}

std::array<cd, 4> polarization_coeffs(modular::Sign sign) {
    const double s = sign == modular::Sign::plus ? 1.0 : -1.0;
    const double r2 = std::numbers::sqrt2;
    const double n = 2.0 * std::sqrt(2.0 - s * r2);
    const cd hh(1.0 / n, 0.0);
    const cd cross(0.0, s * (r2 - s) / n);
    return {hh, cross, cross, hh};
}

PreparedPair prepare_pair(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b) {
    return {packet_a, packet_b, polarization_coeffs(modular::Sign::plus), kSwapSuccessProbability};
}

}  // namespace modchsh::photonics
