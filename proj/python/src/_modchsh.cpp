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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "modchsh/chsh_core.hpp"
#include "modchsh/errors.hpp"
#include "modchsh/modular_space.hpp"
#include "modchsh/photonics.hpp"
#include "modchsh/wrapped_density.hpp"

namespace py = pybind11;
using namespace modchsh;

namespace {

chsh::Observable observable(const chsh::Matrix& m) { return chsh::Observable::from_matrix(m); }

std::array<std::array<double, 2>, 2> joint_table(const chsh::Vector& psi, Eigen::Index dim_a, Eigen::Index dim_b,
                                                 const chsh::Matrix& a, const chsh::Matrix& b) {
    return chsh::joint_probs(chsh::BipartiteState::pure(psi, dim_a, dim_b), observable(a), observable(b)).p;
}

}  // namespace

PYBIND11_MODULE(_modchsh, m) {
    m.doc() = "Modular-variables CHSH simulator.";
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

    m.attr("TSIRELSON") = modular::kTsirelson;
    m.attr("LOCAL_BOUND") = modular::kLocalBound;

    // finite-dimensional layer
    m.def("povm_from_observable", [](const chsh::Matrix& a) {
        const chsh::BinaryPovm p = chsh::povm_from_observable(observable(a));
        return py::make_tuple(p.plus, p.minus);
    }, py::arg("a"));
    m.def("povm_from_unitary", [](const chsh::Matrix& d) {
        const chsh::BinaryPovm p = chsh::povm_from_unitary(chsh::Unitary::from_matrix(d));
        return py::make_tuple(p.plus, p.minus);
    }, py::arg("d"));
    m.def("two_level_observable", [](double theta, bool normalized) {
        return chsh::two_level_observable(theta, normalized).matrix();
    }, py::arg("theta"), py::arg("normalized") = false);
    m.def("correlation", [](const chsh::Vector& psi, Eigen::Index dim_a, Eigen::Index dim_b, const chsh::Matrix& a,
                            const chsh::Matrix& b) {
        return chsh::correlation(chsh::BipartiteState::pure(psi, dim_a, dim_b), observable(a), observable(b));
    }, py::arg("psi"), py::arg("dim_a"), py::arg("dim_b"), py::arg("a"), py::arg("b"));
    m.def("joint_probs", &joint_table, py::arg("psi"), py::arg("dim_a"), py::arg("dim_b"), py::arg("a"), py::arg("b"),
          "P[k][l], index 0 = '+', 1 = '-'.");
    m.def("chsh", [](const chsh::Vector& psi, Eigen::Index dim_a, Eigen::Index dim_b, const chsh::Matrix& a1,
                     const chsh::Matrix& a2, const chsh::Matrix& b1, const chsh::Matrix& b2) {
        return chsh::chsh(chsh::BipartiteState::pure(psi, dim_a, dim_b), observable(a1), observable(a2),
                          observable(b1), observable(b2));
    }, py::arg("psi"), py::arg("dim_a"), py::arg("dim_b"), py::arg("a1"), py::arg("a2"), py::arg("b1"), py::arg("b2"));
    m.def("sample_outcomes", [](const std::array<std::array<double, 2>, 2>& p, std::uint64_t shots, std::uint64_t seed) {
        chsh::JointProbs probs;
        probs.p = p;
        return chsh::sample_outcomes(probs, shots, seed).n;
    }, py::arg("probs"), py::arg("shots"), py::arg("seed"));

    // modular variables
    py::class_<modular::ModularWavepacket>(m, "ModularWavepacket")
        .def(py::init(&modular::ModularWavepacket::make), py::arg("ax") = 0.0, py::arg("ap") = 0.0,
             py::arg("sx") = 0.0, py::arg("sp") = 0.0)
        .def_readonly("ax", &modular::ModularWavepacket::ax)
        .def_readonly("ap", &modular::ModularWavepacket::ap)
        .def_readonly("sx", &modular::ModularWavepacket::sx)
        .def_readonly("sp", &modular::ModularWavepacket::sp)
        .def("with_ax", &modular::ModularWavepacket::with_ax)
        .def("with_sx", &modular::ModularWavepacket::with_sx)
        .def("__repr__", [](const modular::ModularWavepacket& p) {
            return "ModularWavepacket(ax=" + std::to_string(p.ax) + ", ap=" + std::to_string(p.ap) +
                   ", sx=" + std::to_string(p.sx) + ", sp=" + std::to_string(p.sp) + ")";
        });

    m.def("wrap_position", [](double x, double ell) {
        const auto w = modular::wrap_position(x, modular::ModularFrame(ell));
        return py::make_tuple(w.modular, w.index);
    }, py::arg("x"), py::arg("ell") = 1.0);
    m.def("bell_block", [](double xa, double pa, double xb, double pb, double ell) {
        const modular::ModularFrame f(ell);
        const modular::BellBlock b =
            modular::bell_block(modular::ModularPoint::make(xa, pa, f), modular::ModularPoint::make(xb, pb, f), f);
        return py::make_tuple(modular::Matrix4(b.matrix), b.eigenvalues());
    }, py::arg("xa"), py::arg("pa"), py::arg("xb"), py::arg("pb"), py::arg("ell") = 1.0,
       "Pointwise Bell matrix and its ascending eigenvalues.");
    m.def("psi_amplitudes", [](bool plus) {
        return modular::Vector4(modular::psi_amplitudes(plus ? modular::Sign::plus : modular::Sign::minus));
    }, py::arg("plus") = true);
    m.def("bell_expectation", &modular::bell_expectation, py::arg("a"), py::arg("b"),
          py::arg("resolution") = modular::kDefaultResolution, py::arg("tolerance") = modular::kConvergenceTol);
    m.def("bell_expectation_at", &modular::bell_expectation_at, py::arg("a"), py::arg("b"), py::arg("resolution"));
    m.def("bell_expectation_bruteforce", &modular::bell_expectation_bruteforce, py::arg("a"), py::arg("b"),
          py::arg("resolution"), py::arg("max_resolution") = modular::kMaxBruteForceResolution);
    m.def("delta_limit_bell", [](double ax) { return modular::delta_limit_bell(ax, modular::ModularFrame(1.0)); },
          py::arg("ax"), "2√2 cos²(2π a_x), a_x a fraction of ℓ.");
    m.def("midpoint_grid", &modular::midpoint_grid, py::arg("points"));
    m.def("sweep_ax", [](const modular::ModularWavepacket& t, const std::vector<double>& grid, int resolution,
                         unsigned workers) {
        const modular::SweepResult s = modular::sweep_ax(t, grid, resolution, workers);
        py::list rows;
        for (const auto& r : s.rows) rows.append(py::make_tuple(r.ax, r.value, r.converged));
        return rows;
    }, py::arg("template"), py::arg("grid"), py::arg("resolution") = modular::kDefaultResolution,
       py::arg("workers") = 1u, "List of (a_x, value, converged).");
    m.def("max_over_ax", [](const modular::ModularWavepacket& t, int resolution) {
        const modular::InnerMax x = modular::max_over_ax(t, resolution);
        return py::make_tuple(x.ax, x.value);
    }, py::arg("template"), py::arg("resolution") = modular::kDefaultResolution);
    m.def("violation_threshold", [](const modular::ModularWavepacket& t, double lo, double hi, int resolution,
                                    double tolerance) {
        modular::ThresholdOptions o;
        o.tolerance = tolerance;
        return modular::violation_threshold(t, lo, hi, resolution, o).sigma_star;
    }, py::arg("template"), py::arg("lo"), py::arg("hi"), py::arg("resolution") = modular::kDefaultResolution,
       py::arg("tolerance") = 1e-5);

    m.def("wrapped_normal_expectation", [](double center, double std_dev, std::size_t points, double ell) {
        const modular::ModularFrame f(ell);
        return modular::expectation_from_wrapped_density(
            modular::WrappedDensity::wrapped_normal(center, std_dev, points, f), f);
    }, py::arg("center"), py::arg("std_dev"), py::arg("points") = 256, py::arg("ell") = 1.0);
    m.def("expectation_from_wrapped_density", [](std::vector<double> values, double ell) {
        const modular::ModularFrame f(ell);
        return modular::expectation_from_wrapped_density(modular::WrappedDensity::single(std::move(values), f), f);
    }, py::arg("values"), py::arg("ell") = 1.0, "Density samples at k·ℓ/n, k = 0..n-1.");

    // photonics
    m.def("transmission_coeffs", &photonics::transmission_coeffs, py::arg("kappa"), py::arg("m_max"));
    m.def("grating_to_modular", [](double L, double kappa, double sigma, double shift, double slope) {
        const photonics::ModularMapping mp = photonics::grating_to_modular({L, kappa, sigma, shift, slope});
        py::dict d;
        d["ell"] = mp.frame.ell();
        d["packet"] = mp.packet;
        d["sigma_xbar"] = mp.sigma_xbar;
        d["sigma_pbar"] = mp.sigma_pbar;
        d["validity_ratio"] = mp.validity_ratio;
        d["warning"] = mp.warning;
        return d;
    }, py::arg("L"), py::arg("kappa"), py::arg("sigma"), py::arg("shift") = 0.0, py::arg("slope") = 0.0);
    m.def("mach_zehnder_probs", [](const modular::ModularWavepacket& p, double phi, int resolution) {
        const photonics::MachZehnderOutcome o = photonics::mach_zehnder_probs(p, phi, modular::branch_f(), resolution);
        return py::make_tuple(o.p_plus, o.p_minus);
    }, py::arg("packet"), py::arg("phi"), py::arg("resolution") = modular::kDefaultResolution);
    m.def("chsh_tables", [](const modular::ModularWavepacket& a, const modular::ModularWavepacket& b, int resolution) {
        py::list out;
        for (const auto& t : photonics::chsh_tables(a, b, resolution)) out.append(py::make_tuple(t.phi_a, t.phi_b, t.probs.p));
        return out;
    }, py::arg("a"), py::arg("b"), py::arg("resolution") = modular::kDefaultResolution);
    m.def("coincidence_chsh", [](const modular::ModularWavepacket& a, const modular::ModularWavepacket& b,
                                 int resolution) { return photonics::chsh_from_tables(photonics::chsh_tables(a, b, resolution)); },
          py::arg("a"), py::arg("b"), py::arg("resolution") = modular::kDefaultResolution);
    m.def("sample_chsh", [](const modular::ModularWavepacket& a, const modular::ModularWavepacket& b,
                            std::uint64_t shots, std::uint64_t seed, int resolution) {
        const auto counts = photonics::sample_coincidences(photonics::chsh_tables(a, b, resolution), shots, seed);
        const photonics::EmpiricalChsh e = photonics::empirical_chsh(counts);
        py::list tables;
        for (const auto& c : counts) tables.append(c.counts.n);
        return py::make_tuple(e.value, e.std_error, tables);
    }, py::arg("a"), py::arg("b"), py::arg("shots"), py::arg("seed"), py::arg("resolution") = modular::kDefaultResolution,
       "(empirical CHSH, standard error, four 2x2 count tables).");
    m.def("polarization_coeffs", [](bool plus) {
        return photonics::polarization_coeffs(plus ? modular::Sign::plus : modular::Sign::minus);
    }, py::arg("plus") = true);
}
