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

#include "modchsh/modular_space.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include <unsupported/Eigen/KroneckerProduct>

#include "modchsh/errors.hpp"
#include "modchsh/quadrature.hpp"

namespace modchsh::modular {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

Matrix4 bell_matrix(double c_a, double d_a, double c_b, double d_b) {
    static const SigmaBlocks s = sigma_blocks();
    Matrix4 m = c_a * c_b * Eigen::kroneckerProduct(s.sz, s.sz);
    m += c_a * d_b * Eigen::kroneckerProduct(s.sz, s.sy);
    m += d_a * c_b * Eigen::kroneckerProduct(s.sy, s.sz);
    m -= d_a * d_b * Eigen::kroneckerProduct(s.sy, s.sy);
    return m;
}

const BranchContractions& psi_plus_contractions() {
    static const BranchContractions k = branch_contractions(psi_amplitudes(Sign::plus));
    return k;
}

quad::AxisRule x_rule(const ModularWavepacket& p, int resolution) {
    return quad::wrapped_gaussian_rule(p.ax, p.x_density_std(), kHalfPeriodX, resolution);
}

quad::AxisRule p_rule(const ModularWavepacket& p, int resolution) {
    return quad::wrapped_gaussian_rule(p.ap, p.p_density_std(), kPeriodP, resolution);
}

void require_resolution(int resolution) {
    if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
}

double golden_max(const auto& f, double a, double b, double tol) {
    constexpr double kInvPhi = 0.61803398874989484820;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

ModularFrame::ModularFrame(double ell) : ell_(ell) {
    if (!(ell > 0.0) || !std::isfinite(ell)) throw std::invalid_argument("ModularFrame: ell must be positive");
}

WrappedCoordinate wrap_position(double x, const ModularFrame& frame) {
    const double ell = frame.ell();
    const double n = std::floor(x / ell);
    double xbar = x - n * ell;
    if (xbar >= ell) xbar -= ell;
    return {std::max(0.0, xbar), static_cast<std::int64_t>(n)};
}

WrappedCoordinate wrap_momentum(double p, const ModularFrame& frame) {
    const double period = frame.momentum_period();
    const double m = std::floor(p / period);
    double pbar = p - m * period;
    if (pbar >= period) pbar -= period;
    return {std::max(0.0, pbar), static_cast<std::int64_t>(m)};
}

ModularPoint ModularPoint::make(double xbar, double pbar, const ModularFrame& frame) {
    if (!(xbar >= 0.0 && xbar < frame.ell())) {
        throw std::invalid_argument("ModularPoint: xbar outside [0, ell)");
    }
    if (!(pbar >= 0.0 && pbar < frame.momentum_period())) {
        throw std::invalid_argument("ModularPoint: pbar outside [0, h/ell)");
    }
    return ModularPoint(xbar, pbar);
}

SigmaBlocks sigma_blocks() {
    SigmaBlocks s;
    s.sz << 1.0, 0.0, 0.0, -1.0;
    s.sy << cd(0.0, 0.0), cd(0.0, -1.0), cd(0.0, 1.0), cd(0.0, 0.0);
    return s;
}

double weight_zero(double x_frac) { return std::cos(2.0 * kPi * x_frac); }

double weight_half_pi(double x_frac, double p_frac) { return std::cos(2.0 * kPi * x_frac - kPi * p_frac); }

Eigen::Vector4d BellBlock::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix4> solver(matrix, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

BellBlock bell_block(const ModularPoint& point_a, const ModularPoint& point_b, const ModularFrame& frame) {
    const double half = 0.5 * frame.ell();
    if (point_a.xbar() >= half || point_b.xbar() >= half) {
        throw std::invalid_argument("bell_block: xbar must lie in [0, ell/2)");
    }
    const double xa = frame.x_fraction(point_a.xbar());
    const double xb = frame.x_fraction(point_b.xbar());
    const double pa = frame.p_fraction(point_a.pbar());
    const double pb = frame.p_fraction(point_b.pbar());
    const double c_a = weight_zero(xa);
    const double d_a = weight_half_pi(xa, pa);
    const double c_b = weight_zero(xb);
    const double d_b = weight_half_pi(xb, pb);
    return {point_a, point_b, bell_matrix(c_a, d_a, c_b, d_b), c_a, d_a, c_b, d_b};
}

Vector4 psi_amplitudes(Sign sign) {
    const double s = sign == Sign::plus ? 1.0 : -1.0;
    const double r2 = std::numbers::sqrt2;
    const cd cross(0.0, s * (r2 - s));
    const double norm = 2.0 * std::sqrt(2.0 - s * r2);
    Vector4 v;
    v << 1.0, cross, cross, 1.0;
    return v / norm;
}

BranchContractions branch_contractions(const Vector4& psi) {
    const SigmaBlocks s = sigma_blocks();
    auto expect = [&](const Matrix2& a, const Matrix2& b) {
        const Matrix4 op = Eigen::kroneckerProduct(a, b);
        return psi.dot(op * psi).real();
    };
    return {expect(s.sz, s.sz), expect(s.sz, s.sy), expect(s.sy, s.sz), expect(s.sy, s.sy)};
}

ModularWavepacket ModularWavepacket::make(double ax, double ap, double sx, double sp) {
    if (!(ax >= 0.0 && ax < kHalfPeriodX)) throw std::invalid_argument("packet: a_x must lie in [0, 1/2) of ell");
    if (!(ap >= 0.0 && ap < kPeriodP)) throw std::invalid_argument("packet: a_p must lie in [0, 1) of h/ell");
    if (!(sx >= 0.0) || !std::isfinite(sx)) throw std::invalid_argument("packet: sigma_x must be >= 0");
    if (!(sp >= 0.0) || !std::isfinite(sp)) throw std::invalid_argument("packet: sigma_p must be >= 0");
    return ModularWavepacket{ax, ap, sx, sp};
}

double wrapped_gaussian_density(const ModularWavepacket& packet, const ModularPoint& point,
                                const ModularFrame& frame) {
    if (packet.sx == 0.0 || packet.sp == 0.0) {
        throw std::domain_error("wrapped_gaussian_density: point-mass axis has no density");
    }
    const double xf = frame.x_fraction(point.xbar());
    const double pf = frame.p_fraction(point.pbar());
    if (xf >= kHalfPeriodX) throw std::invalid_argument("wrapped_gaussian_density: xbar outside [0, ell/2)");
    const double rho_x = quad::wrapped_normal_pdf(xf, packet.ax, packet.x_density_std(), kHalfPeriodX);
    const double rho_p = quad::wrapped_normal_pdf(pf, packet.ap, packet.p_density_std(), kPeriodP);
    return rho_x / frame.ell() * rho_p / frame.momentum_period();
}

PartyMoments party_moments(const ModularWavepacket& packet, int resolution) {
    require_resolution(resolution);
    const quad::AxisRule xr = x_rule(packet, resolution);
    const quad::AxisRule pr = p_rule(packet, resolution);
    // cos(2πx - πp) = cos 2πx cos πp + sin 2πx sin πp
    double cx = 0.0, sx = 0.0;
    for (std::size_t i = 0; i < xr.size(); ++i) {
        cx += xr.weights[i] * std::cos(2.0 * kPi * xr.nodes[i]);
        sx += xr.weights[i] * std::sin(2.0 * kPi * xr.nodes[i]);
    }
    double cp = 0.0, sp = 0.0;
    for (std::size_t j = 0; j < pr.size(); ++j) {
        cp += pr.weights[j] * std::cos(kPi * pr.nodes[j]);
        sp += pr.weights[j] * std::sin(kPi * pr.nodes[j]);
    }
    return {cx, cx * cp + sx * sp};
}

double bell_expectation_at(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                           int resolution) {
    const PartyMoments a = party_moments(packet_a, resolution);
    const PartyMoments b = packet_b == packet_a ? a : party_moments(packet_b, resolution);
    const BranchContractions& k = psi_plus_contractions();
    return k.zz * a.c * b.c + k.zy * a.c * b.d + k.yz * a.d * b.c - k.yy * a.d * b.d;
}

BellEstimate estimate_bell(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                           int resolution, double tolerance) {
    const double coarse = bell_expectation_at(packet_a, packet_b, resolution);
    const double fine = bell_expectation_at(packet_a, packet_b, 2 * resolution);
    const double delta = std::abs(fine - coarse);
    return {fine, delta, resolution, delta <= tolerance};
}

double bell_expectation(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                        int resolution, double tolerance) {
    const BellEstimate e = estimate_bell(packet_a, packet_b, resolution, tolerance);
    if (!e.converged) {
        throw NumericalFailure("bell_expectation: resolution doubling changed the value by " +
                               std::to_string(e.delta));
    }
    return e.value;
}

double bell_expectation_bruteforce(const ModularWavepacket& packet_a, const ModularWavepacket& packet_b,
                                   int resolution, int max_resolution) {
    require_resolution(resolution);
    if (resolution > max_resolution) {
        throw std::invalid_argument("bell_expectation_bruteforce: resolution " + std::to_string(resolution) +
                                    " exceeds the node budget " + std::to_string(max_resolution));
    }
    const quad::AxisRule xa = x_rule(packet_a, resolution);
    const quad::AxisRule pa = p_rule(packet_a, resolution);
    const quad::AxisRule xb = x_rule(packet_b, resolution);
    const quad::AxisRule pb = p_rule(packet_b, resolution);
    const Vector4 psi = psi_amplitudes(Sign::plus);

    double total = 0.0;
    for (std::size_t i = 0; i < xa.size(); ++i) {
        const double c_a = weight_zero(xa.nodes[i]);
        for (std::size_t j = 0; j < pa.size(); ++j) {
            const double d_a = weight_half_pi(xa.nodes[i], pa.nodes[j]);
            const double w_a = xa.weights[i] * pa.weights[j];
            double inner = 0.0;
            for (std::size_t k = 0; k < xb.size(); ++k) {
                const double c_b = weight_zero(xb.nodes[k]);
                for (std::size_t l = 0; l < pb.size(); ++l) {
                    const double d_b = weight_half_pi(xb.nodes[k], pb.nodes[l]);
                    const Matrix4 m = bell_matrix(c_a, d_a, c_b, d_b);
                    inner += xb.weights[k] * pb.weights[l] * psi.dot(m * psi).real();
                }
            }
            total += w_a * inner;
        }
    }
    return total;
}

double delta_limit_bell(double a_xbar, const ModularFrame& frame) {
    const double c = std::cos(2.0 * kPi * a_xbar / frame.ell());
    return kTsirelson * c * c;
}

double SweepResult::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const SweepRow& r : rows) m = std::max(m, r.value);
    return m;
}

double SweepResult::max_delta() const {
    double m = 0.0;
    for (const SweepRow& r : rows) m = std::max(m, r.delta);
    return m;
}

std::size_t SweepResult::converged_rows() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) {
        return r.converged;
    }));
}

std::vector<double> midpoint_grid(int points) {
    if (points < 1) throw std::invalid_argument("midpoint_grid: need at least one point");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) grid[k] = kHalfPeriodX * (k + 0.5) / points;
    return grid;
}

SweepResult sweep_ax(const ModularWavepacket& packet_template, const std::vector<double>& ax_grid,
                     int resolution, unsigned workers) {
    if (ax_grid.empty()) throw std::invalid_argument("sweep_ax: empty grid");
    for (std::size_t i = 0; i < ax_grid.size(); ++i) {
        if (!(ax_grid[i] >= 0.0 && ax_grid[i] < kHalfPeriodX)) {
            throw std::invalid_argument("sweep_ax: grid point " + std::to_string(i) + " outside [0, 1/2)");
        }
    }
    SweepResult out{std::vector<SweepRow>(ax_grid.size()), packet_template, resolution};
    auto run_rows = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const ModularWavepacket p = packet_template.with_ax(ax_grid[i]);
            const BellEstimate e = estimate_bell(p, p, resolution);
            out.rows[i] = {ax_grid[i], e.value, e.delta, e.converged};
        }
    };
    const std::size_t n = ax_grid.size();
    const std::size_t threads = std::clamp<std::size_t>(workers, 1, n);
    if (threads == 1) {
        run_rows(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            pool.emplace_back(run_rows, begin, std::min(n, begin + chunk));
        }
    }
    return out;
}

InnerMax max_over_ax(const ModularWavepacket& packet_template, int resolution, int coarse_points) {
    const std::vector<double> grid = midpoint_grid(coarse_points);
    auto f = [&](double ax) {
        const ModularWavepacket p = packet_template.with_ax(ax);
        return bell_expectation_at(p, p, resolution);
    };
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = f(grid[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    const double cell = kHalfPeriodX / coarse_points;
    const double a = std::max(0.0, grid[best] - cell);
    const double b = std::min(std::nextafter(kHalfPeriodX, 0.0), grid[best] + cell);
    const double ax = golden_max(f, a, b, 1e-10);
    const double v = f(ax);
    if (v >= best_value) return {packet_template.sx, ax, v};
    return {packet_template.sx, grid[best], best_value};
}

ThresholdResult violation_threshold(const ModularWavepacket& packet_template, double sx_lo, double sx_hi,
                                    int resolution, const ThresholdOptions& options) {
    if (!(sx_lo >= 0.0) || !(sx_hi > sx_lo)) {
        throw std::invalid_argument("violation_threshold: bracket must satisfy 0 <= lo < hi");
    }
    ThresholdResult out{0.0, sx_lo, sx_hi, 0, {}};
    auto excess = [&](double sx) {
        const InnerMax m = max_over_ax(packet_template.with_sx(sx), resolution, options.coarse_points);
        out.evaluations.push_back(m);
        return m.value - kLocalBound;
    };
    double lo = sx_lo;
    double hi = sx_hi;
    double f_lo = excess(lo);
    const double f_hi = excess(hi);
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        throw NumericalFailure("violation_threshold: max <B> - 2 has no sign change on [" + std::to_string(sx_lo) +
                               ", " + std::to_string(sx_hi) + "]");
    }
    while (hi - lo > options.tolerance && out.iterations < options.max_iterations) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = excess(mid);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        ++out.iterations;
    }
    out.sigma_star = 0.5 * (lo + hi);
    out.lo = lo;
    out.hi = hi;
    return out;
}

Setting setting_from_angle(double phi) {
    if (std::abs(phi) <= 1e-12) return Setting::zero;
    if (std::abs(phi - 0.5 * kPi) <= 1e-12) return Setting::half_pi;
    throw std::invalid_argument("unsupported setting angle " + std::to_string(phi) + " (only 0 and pi/2)");
}

double setting_angle(Setting s) { return s == Setting::zero ? 0.0 : 0.5 * kPi; }

double setting_weight(const PartyMoments& m, Setting s) { return s == Setting::zero ? m.c : m.d; }

Matrix2 setting_block(Setting s) {
    const SigmaBlocks b = sigma_blocks();
    return s == Setting::zero ? b.sz : b.sy;
}

Matrix2 branch_f() {
    Matrix2 rho = Matrix2::Zero();
    rho(0, 0) = 1.0;
    return rho;
}

double single_party_expectation(const ModularWavepacket& packet, Setting setting, const Matrix2& branch,
                                int resolution) {
    if (std::abs(branch.trace() - cd(1.0, 0.0)) > 1e-12 || (branch - branch.adjoint()).norm() > 1e-12) {
        throw std::invalid_argument("single_party_expectation: branch state must be a unit-trace Hermitian matrix");
    }
    const double w = setting_weight(party_moments(packet, resolution), setting);
    return w * (branch * setting_block(setting)).trace().real();
}

Matrix2 reduced_branch(const Vector4& psi, int party) {
    if (party != 0 && party != 1) throw std::invalid_argument("reduced_branch: party must be 0 or 1");
    Matrix2 rho = Matrix2::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int ip = 0; ip < 2; ++ip) {
            for (int j = 0; j < 2; ++j) {
                const int r = party == 0 ? 2 * i + j : 2 * j + i;
                const int c = party == 0 ? 2 * ip + j : 2 * j + ip;
                rho(i, ip) += psi(r) * std::conj(psi(c));
            }
        }
    }
    return rho;
}

}  // namespace modchsh::modular
