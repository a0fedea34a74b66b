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

// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include <fmt/format.h>

#include "modchsh/chsh_core.hpp"
#include "modchsh/modular_space.hpp"
#include "modchsh/photonics.hpp"
#include "modchsh/random_ensembles.hpp"
#include "modchsh/wrapped_density.hpp"

namespace {

using namespace modchsh;
using modular::ModularWavepacket;
using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

struct Outcome {
    bool pass;
    std::string detail;
};

ModularWavepacket packet(double ax, double ap, double sx, double sp) { return ModularWavepacket::make(ax, ap, sx, sp); }

Outcome bell_block_eigensystem() {
    const modular::ModularFrame f(1.0);
    const auto o = modular::ModularPoint::make(0.0, 0.0, f);
    const modular::BellBlock b = modular::bell_block(o, o, f);
    const Eigen::Vector4d ev = b.eigenvalues();
    const Eigen::Vector4d want(-2 * kSqrt2, 0.0, 0.0, 2 * kSqrt2);
    const double eig_err = (ev - want).cwiseAbs().maxCoeff();
    const auto pp = modular::psi_amplitudes(modular::Sign::plus);
    const auto pm = modular::psi_amplitudes(modular::Sign::minus);
    const double vec_err = std::max((b.matrix * pp - 2 * kSqrt2 * pp).norm(), (b.matrix * pm + 2 * kSqrt2 * pm).norm());
    const double herm = (b.matrix - b.matrix.adjoint()).norm();
    return {eig_err < 1e-12 && vec_err < 1e-12 && herm < 1e-12,
            fmt::format("eigenvalue err {:.2e}, eigenvector residual {:.2e}", eig_err, vec_err)};
}

Outcome delta_limit_curve() {
    const auto t0 = std::chrono::steady_clock::now();
    const modular::ModularFrame f(1.0);
    // Momentum is the exact point mass at a_p = 0; see README for why a
    // finite width cannot sit on the seam.
    const modular::SweepResult s = modular::sweep_ax(packet(0, 0, 1e-4, 0), modular::midpoint_grid(32), 64);
    double sup = 0.0;
    for (const auto& r : s.rows) sup = std::max(sup, std::abs(r.value - modular::delta_limit_bell(r.ax, f)));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {sup < 0.01 && s.converged_rows() == 32 && secs < 60.0,
            fmt::format("sigma_x=1e-4, 32 points, sup error {:.2e}, {:.2f}s", sup, secs)};
}

Outcome threshold(double ap, double sp, double lo, double hi) {
    const auto t0 = std::chrono::steady_clock::now();
    const modular::ThresholdResult t = modular::violation_threshold(packet(0, ap, 0.01, sp), 0.01, 0.08, 64);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {t.sigma_star >= lo && t.sigma_star <= hi && secs < 600.0,
            fmt::format("sigma_x* = {:.5f} in [{}, {}], {} bisections, {:.2f}s", t.sigma_star, lo, hi, t.iterations,
                        secs)};
}

Outcome curve_family() {
    std::string maxima;
    bool decreasing = true;
    double previous = INFINITY;
    for (double sx : {0.001, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08}) {
        const double m = modular::max_over_ax(packet(0, 0, sx, 0), 64).value;
        decreasing = decreasing && m < previous;
        previous = m;
        maxima += fmt::format("{}{:.3f}", maxima.empty() ? "" : " ", m);
    }
    const ModularWavepacket b = packet(0, 0.1, 0.03, 0.1);
    const modular::InnerMax peak = modular::max_over_ax(b, 64);
    const double d = 0.05;
    const double left = modular::bell_expectation(b.with_ax(peak.ax - d), b.with_ax(peak.ax - d));
    const double right = modular::bell_expectation(b.with_ax(peak.ax + d), b.with_ax(peak.ax + d));
    const double asym = std::abs(left - right);
    return {decreasing && asym > 1e-3, fmt::format("maxima {}; case-(b) asymmetry {:.3f}", maxima, asym)};
}

Outcome povm_suite() {
    std::mt19937_64 rng(2026);
    double completeness = 0.0, positivity = INFINITY, equivalence = 0.0, table_sum = 0.0, table_corr = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index dim = 2 + t % 5;
        const chsh::Observable a = chsh::random_observable(dim, rng);
        const chsh::PovmDefects da = chsh::povm_defects(chsh::povm_from_observable(a));
        const chsh::Matrix u = chsh::haar_random_unitary(dim, rng);
        const chsh::BinaryPovm pu = chsh::povm_from_unitary(chsh::Unitary::from_matrix(u));
        const chsh::BinaryPovm po =
            chsh::povm_from_observable(chsh::Observable::from_matrix(0.5 * (u + u.adjoint())));
        const chsh::PovmDefects du = chsh::povm_defects(pu);
        completeness = std::max({completeness, da.completeness, du.completeness});
        positivity = std::min({positivity, da.min_eigenvalue, du.min_eigenvalue});
        equivalence = std::max({equivalence, (pu.plus - po.plus).cwiseAbs().maxCoeff(),
                                (pu.minus - po.minus).cwiseAbs().maxCoeff()});

        const Eigen::Index db = 2 + (t / 5) % 3;
        const chsh::BipartiteState s = chsh::BipartiteState::pure(chsh::haar_random_state(dim * db, rng), dim, db);
        const chsh::Observable b = chsh::random_observable(db, rng);
        const chsh::JointProbs p = chsh::joint_probs(s, a, b);
        table_sum = std::max(table_sum, std::abs(p.sum() - 1.0));
        table_corr = std::max(table_corr, std::abs(p.correlation() - chsh::correlation(s, a, b)));
    }
    return {completeness < 1e-10 && positivity >= -1e-10 && equivalence < 1e-10 && table_sum < 1e-12 &&
                table_corr < 1e-12,
            fmt::format("completeness {:.1e}, min eigenvalue {:.1e}, equivalence {:.1e}, table sum {:.1e}, "
                        "correlation {:.1e}",
                        completeness, positivity, equivalence, table_sum, table_corr)};
}

Outcome tsirelson_audit() {
    std::mt19937_64 rng(77);
    double worst = -INFINITY;
    for (int t = 0; t < 1000; ++t) {
        const Eigen::Index da = 2 + (t / 2) % 2, db = 2 + (t / 4) % 2;
        const chsh::BipartiteState s = chsh::BipartiteState::pure(chsh::haar_random_state(da * db, rng), da, db);
        auto draw = [&](Eigen::Index d) {
            return t % 2 == 0 ? chsh::random_observable(d, rng) : chsh::random_projective_observable(d, rng);
        };
        const chsh::Observable a1 = draw(da), a2 = draw(da), b1 = draw(db), b2 = draw(db);
        const double v = chsh::chsh(s, a1, a2, b1, b2);
        worst = std::max(worst, std::abs(v));
    }
    // Optimal singlet settings, checked against an explicit index contraction.
    auto spin = [](double a) { return chsh::Matrix(std::cos(a) * chsh::pauli_z().matrix() + std::sin(a) * chsh::pauli_x().matrix()); };
    const chsh::Matrix a1 = spin(0), a2 = spin(kPi / 2), b1 = -spin(kPi / 4), b2 = -spin(-kPi / 4);
    const chsh::BipartiteState singlet = chsh::BipartiteState::singlet();
    const double s = chsh::chsh(singlet, chsh::Observable::from_matrix(a1), chsh::Observable::from_matrix(a2),
                                chsh::Observable::from_matrix(b1), chsh::Observable::from_matrix(b2));
    chsh::Vector psi = chsh::Vector::Zero(4);
    psi(1) = 1 / kSqrt2;
    psi(2) = -1 / kSqrt2;
    auto contract = [&](const chsh::Matrix& a, const chsh::Matrix& b) {
        cd acc = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) acc += std::conj(psi(2 * i + j)) * a(i, k) * b(j, l) * psi(2 * k + l);
        return acc.real();
    };
    const double oracle = contract(a1, b1) + contract(a1, b2) + contract(a2, b1) - contract(a2, b2);
    const bool ok = worst <= 2 * kSqrt2 + 1e-9 && std::abs(s - 2 * kSqrt2) < 1e-9 && std::abs(oracle - 2 * kSqrt2) < 1e-9;
    return {ok, fmt::format("max |S| over 1000 draws {:.6f}; singlet {:.12f} (oracle {:.12f})", worst, s, oracle)};
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const ModularWavepacket a = packet(0.5 * u(rng), u(rng), 0.01 + 0.15 * u(rng), 0.01 + 0.3 * u(rng));
        const ModularWavepacket b = packet(0.5 * u(rng), u(rng), 0.01 + 0.15 * u(rng), 0.01 + 0.3 * u(rng));
        worst = std::max(worst, std::abs(modular::bell_expectation_bruteforce(a, b, 32) -
                                         modular::bell_expectation_at(a, b, 32)));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst < 1e-8 && secs < 300.0, fmt::format("max |fast - 4D| = {:.2e} over 10 pairs, {:.2f}s", worst, secs)};
}

Outcome cross_layer() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const ModularWavepacket a = packet(0.5 * u(rng), u(rng), 0.1 * u(rng), 0.2 * u(rng));
        const ModularWavepacket b = packet(0.5 * u(rng), u(rng), 0.1 * u(rng), 0.2 * u(rng));
        const double tables = photonics::chsh_from_tables(photonics::chsh_tables(a, b, 2 * modular::kDefaultResolution));
        worst = std::max(worst, std::abs(tables - modular::bell_expectation(a, b)));
    }
    const ModularWavepacket o = packet(0, 0, 0, 0);
    const photonics::ChshTables tables = photonics::chsh_tables(o, o);
    const double analytic = photonics::chsh_from_tables(tables);
    const photonics::EmpiricalChsh e = photonics::empirical_chsh(photonics::sample_coincidences(tables, 100000, 2026));
    const double z = (e.value - analytic) / e.std_error;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst < 1e-8 && std::abs(z) < 5.0 && secs < 60.0,
            fmt::format("tables vs Bell {:.1e}; empirical {:.4f} +- {:.4f} vs {:.4f} (z = {:.2f})", worst, e.value,
                        e.std_error, analytic, z)};
}

Outcome density_and_equivalence_class() {
    const modular::ModularFrame f(1.0);
    double wn = 0.0;
    for (double s : {0.01, 0.05, 0.1, 0.2, 0.35}) {
        const auto d = modular::WrappedDensity::wrapped_normal(0.0, s, 256, f);
        wn = std::max(wn, std::abs(modular::expectation_from_wrapped_density(d, f) - std::exp(-2 * kPi * kPi * s * s)));
    }
    double cls = 0.0;
    const chsh::Matrix a = chsh::pauli_z().matrix();
    for (int i = 0; i <= 64; ++i) {
        for (int j = 0; j <= 32; ++j) {
            const double alpha = kPi * i / 64.0, beta = 2 * kPi * j / 32.0;
            chsh::Vector psi(2);
            psi << std::cos(alpha), std::polar(std::sin(alpha), beta);
            cls = std::max(cls, std::abs((psi.adjoint() * a * psi)(0, 0).real() - std::cos(2 * alpha)));
        }
    }
    return {wn < 1e-10 && cls < 1e-12,
            fmt::format("wrapped-normal oracle err {:.1e}; cos 2 alpha identity err {:.1e}", wn, cls)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"Bell-block eigensystem at the origin", bell_block_eigensystem},
        {"delta-limit curve", delta_limit_curve},
        {"threshold, point-mass momentum", [] { return threshold(0.0, 0.0, 0.045, 0.053); }},
        {"threshold, a_p = sigma_p = 0.1", [] { return threshold(0.1, 0.1, 0.035, 0.043); }},
        {"curve family ordering and asymmetry", curve_family},
        {"POVM algebra suite", povm_suite},
        {"Tsirelson audit", tsirelson_audit},
        {"fast path vs 4D oracle", oracle_equivalence},
        {"coincidence tables vs Bell value, Monte Carlo", cross_layer},
        {"wrapped density and equivalence class", density_and_equivalence_class},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
