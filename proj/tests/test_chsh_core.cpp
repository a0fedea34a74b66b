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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "modchsh/chsh_core.hpp"
#include "modchsh/random_ensembles.hpp"

using namespace modchsh::chsh;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix diag(std::initializer_list<cd> d) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (cd v : d) m(i, i) = v, ++i;
    return m;
}

// ⟨ψ| a ⊗ b |ψ⟩ by explicit index contraction, independent of Kronecker products.
double contract(const Vector& psi, const Matrix& a, const Matrix& b) {
    const Eigen::Index da = a.rows(), db = b.rows();
    cd acc = 0.0;
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < db; ++j)
            for (Eigen::Index k = 0; k < da; ++k)
                for (Eigen::Index l = 0; l < db; ++l)
                    acc += std::conj(psi(i * db + j)) * a(i, k) * b(j, l) * psi(k * db + l);
    return acc.real();
}

Matrix spin(double angle) {
    return std::cos(angle) * pauli_z().matrix() + std::sin(angle) * pauli_x().matrix();
}

}  // namespace

TEST_CASE("observable construction validates hermiticity and spectrum") {
    CHECK_NOTHROW(Observable::from_matrix(diag({1.0, -1.0})));
    CHECK_THROWS_AS(Observable::from_matrix(diag({1.5, 0.0})), std::invalid_argument);
    Matrix nh = Matrix::Zero(2, 2);
    nh(0, 1) = 0.5;
    CHECK_THROWS_AS(Observable::from_matrix(nh), std::invalid_argument);
    CHECK_NOTHROW(Observable::from_matrix(diag({1.0 + 5e-11, 0.0})));
}

TEST_CASE("rescale_to_unit_spectrum divides by the spectral radius") {
    const Observable o = rescale_to_unit_spectrum(diag({3.0, -1.5}));
    CHECK(std::abs(o.matrix()(0, 0).real() - 1.0) < 1e-15);
    CHECK(std::abs(o.matrix()(1, 1).real() + 0.5) < 1e-15);
    const Observable same = rescale_to_unit_spectrum(diag({0.5, 0.25}));
    CHECK(std::abs(same.matrix()(0, 0).real() - 0.5) < 1e-15);
}

TEST_CASE("povm_from_observable") {
    SUBCASE("projective limit") {
        const BinaryPovm p = povm_from_observable(Observable::from_matrix(diag({1.0, -1.0})));
        CHECK(max_abs(p.plus - diag({1.0, 0.0})) < 1e-15);
        CHECK(max_abs(p.minus - diag({0.0, 1.0})) < 1e-15);
    }
    SUBCASE("unbiased coin") {
        const BinaryPovm p = povm_from_observable(Observable::from_matrix(Matrix::Zero(3, 3)));
        CHECK(max_abs(p.plus - 0.5 * Matrix::Identity(3, 3)) < 1e-15);
        CHECK(max_abs(p.minus - 0.5 * Matrix::Identity(3, 3)) < 1e-15);
    }
    SUBCASE("cosine spectrum") {
        const BinaryPovm p = povm_from_observable(Observable::from_matrix(diag({std::cos(kPi / 3), std::cos(kPi)})));
        CHECK(std::abs(p.plus(0, 0).real() - 0.75) < 1e-15);
        CHECK(std::abs(p.plus(1, 1).real()) < 1e-15);
    }
}

TEST_CASE("povm_from_unitary") {
    SUBCASE("identity") {
        const BinaryPovm p = povm_from_unitary(Unitary::from_matrix(Matrix::Identity(2, 2)));
        CHECK(max_abs(p.plus - Matrix::Identity(2, 2)) < 1e-15);
        CHECK(max_abs(p.minus) < 1e-15);
    }
    SUBCASE("purely imaginary diagonal") {
        const BinaryPovm p = povm_from_unitary(Unitary::from_matrix(diag({cd(0, 1), cd(0, -1)})));
        CHECK(max_abs(p.plus - 0.5 * Matrix::Identity(2, 2)) < 1e-15);
    }
    SUBCASE("agrees with the real part for random unitaries") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            const Matrix d = haar_random_unitary(4, rng);
            const BinaryPovm pu = povm_from_unitary(Unitary::from_matrix(d));
            const BinaryPovm po = povm_from_observable(Observable::from_matrix(0.5 * (d + d.adjoint())));
            CHECK(max_abs(pu.plus - po.plus) < 1e-12);
            CHECK(max_abs(pu.minus - po.minus) < 1e-12);
        }
    }
    SUBCASE("non-unitary input is rejected") {
        CHECK_THROWS_AS(Unitary::from_matrix(diag({1.0, 0.5})), std::invalid_argument);
    }
}

TEST_CASE("observable_from_unitary") {
    const Observable a = observable_from_unitary(Unitary::from_matrix(diag({std::polar(1.0, 0.0), std::polar(1.0, kPi)})));
    CHECK(max_abs(a.matrix() - diag({1.0, -1.0})) < 1e-15);

    // exp(i σ_y π/4) = cos(π/4) 1 + i sin(π/4) σ_y
    const Matrix d = std::cos(kPi / 4) * Matrix::Identity(2, 2) + cd(0, 1) * std::sin(kPi / 4) * pauli_y().matrix();
    const Observable r = observable_from_unitary(Unitary::from_matrix(d));
    CHECK(max_abs(r.matrix() - std::cos(kPi / 4) * Matrix::Identity(2, 2)) < 1e-15);

    const Observable id = observable_from_unitary(Unitary::from_matrix(Matrix::Identity(3, 3)));
    CHECK(max_abs(id.matrix() - Matrix::Identity(3, 3)) < 1e-15);
}

TEST_CASE("two_level_observable") {
    CHECK(max_abs(two_level_observable(kPi / 2, false).matrix() - diag({-1.0, 1.0})) < 1e-15);
    CHECK(max_abs(two_level_observable(kPi / 6, false).matrix() - diag({-0.5, 0.5})) < 1e-15);
    CHECK(max_abs(two_level_observable(kPi / 6, true).matrix() - diag({-1.0, 1.0})) < 1e-15);
    CHECK_THROWS_AS(two_level_observable(0.0, true), std::invalid_argument);
    CHECK(max_abs(two_level_observable(0.0, false).matrix()) < 1e-15);
}

TEST_CASE("correlation") {
    const BipartiteState singlet = BipartiteState::singlet();
    CHECK(std::abs(correlation(singlet, pauli_z(), pauli_z()) + 1.0) < 1e-15);

    Vector zero = Vector::Zero(2);
    zero(0) = 1.0;
    const BipartiteState up_up = BipartiteState::product(zero, zero);
    CHECK(std::abs(correlation(up_up, pauli_z(), pauli_z()) - 1.0) < 1e-15);

    const Observable b = Observable::from_matrix(spin(kPi / 4));
    CHECK(std::abs(correlation(singlet, pauli_z(), b) + 1.0 / kSqrt2) < 1e-15);

    const Observable three = Observable::from_matrix(Matrix::Zero(3, 3));
    CHECK_THROWS_AS(correlation(singlet, three, pauli_z()), std::invalid_argument);
}

TEST_CASE("joint_probs") {
    SUBCASE("maximally mixed") {
        const JointProbs p = joint_probs(BipartiteState::maximally_mixed(2, 2), pauli_x(), pauli_z());
        for (auto& row : p.p)
            for (double v : row) CHECK(std::abs(v - 0.25) < 1e-15);
    }
    SUBCASE("singlet along z") {
        const JointProbs p = joint_probs(BipartiteState::singlet(), pauli_z(), pauli_z());
        CHECK(std::abs(p.at(Outcome::plus, Outcome::minus) - 0.5) < 1e-15);
        CHECK(std::abs(p.at(Outcome::minus, Outcome::plus) - 0.5) < 1e-15);
        CHECK(std::abs(p.at(Outcome::plus, Outcome::plus)) < 1e-15);
        CHECK(std::abs(p.at(Outcome::minus, Outcome::minus)) < 1e-15);
    }
    SUBCASE("singlet at CHSH angles against the contraction oracle") {
        const Vector psi = [] {
            Vector v = Vector::Zero(4);
            v(1) = 1.0 / kSqrt2;
            v(2) = -1.0 / kSqrt2;
            return v;
        }();
        for (double ta : {0.0, kPi / 2}) {
            for (double tb : {kPi / 4, -kPi / 4}) {
                const Matrix ma = spin(ta), mb = spin(tb);
                const JointProbs p = joint_probs(BipartiteState::singlet(), Observable::from_matrix(ma),
                                                 Observable::from_matrix(mb));
                const Matrix id = Matrix::Identity(2, 2);
                for (int k = 0; k < 2; ++k) {
                    for (int l = 0; l < 2; ++l) {
                        const double sk = k == 0 ? 1.0 : -1.0, sl = l == 0 ? 1.0 : -1.0;
                        const double oracle = contract(psi, 0.5 * (id + sk * ma), 0.5 * (id + sl * mb));
                        CHECK(std::abs(p.p[k][l] - oracle) < 1e-12);
                    }
                }
                CHECK(std::abs(p.correlation() - contract(psi, ma, mb)) < 1e-12);
            }
        }
    }
    SUBCASE("marginals reproduce single-party expectations") {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 20; ++t) {
            const BipartiteState s = BipartiteState::pure(haar_random_state(6, rng), 2, 3);
            const Observable a = random_observable(2, rng), b = random_observable(3, rng);
            const JointProbs p = joint_probs(s, a, b);
            CHECK(std::abs(p.sum() - 1.0) < 1e-12);
            const double ea = s.expectation(a.matrix(), Matrix::Identity(3, 3));
            const double eb = s.expectation(Matrix::Identity(2, 2), b.matrix());
            CHECK(std::abs(p.marginal_a(Outcome::plus) - p.marginal_a(Outcome::minus) - ea) < 1e-12);
            CHECK(std::abs(p.marginal_b(Outcome::plus) - p.marginal_b(Outcome::minus) - eb) < 1e-12);
            CHECK(std::abs(p.correlation() - correlation(s, a, b)) < 1e-12);
        }
    }
}

TEST_CASE("chsh") {
    const BipartiteState singlet = BipartiteState::singlet();
    const double s = chsh(singlet, pauli_z(), pauli_x(), Observable::from_matrix(-spin(kPi / 4)),
                          Observable::from_matrix(-spin(-kPi / 4)));
    CHECK(std::abs(s - 2.0 * kSqrt2) < 1e-12);

    // Brute-force angle grid over coplanar settings: nothing beats 2√2.
    double best = 0.0;
    const int n = 24;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    auto a = [&](int q) { return 2.0 * kPi * q / n; };
                    const double v = -std::cos(a(i) - a(k)) - std::cos(a(i) - a(l)) - std::cos(a(j) - a(k)) +
                                     std::cos(a(j) - a(l));
                    best = std::max(best, v);
                }
    CHECK(std::abs(best - 2.0 * kSqrt2) < 1e-12);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const BipartiteState prod = BipartiteState::product(haar_random_state(2, rng), haar_random_state(2, rng));
        const double v = chsh(prod, random_observable(2, rng), random_observable(2, rng), random_observable(2, rng),
                              random_observable(2, rng));
        CHECK(std::abs(v) <= 2.0 + 1e-9);
    }
    CHECK(std::abs(chsh(BipartiteState::maximally_mixed(2, 2), pauli_z(), pauli_x(), pauli_z(), pauli_x())) < 1e-15);
}

TEST_CASE("equivalence-class states give cos 2 alpha") {
    const Observable a = pauli_z();
    for (int i = 0; i <= 16; ++i) {
        for (int j = 0; j <= 8; ++j) {
            const double alpha = kPi * i / 16.0, beta = 2.0 * kPi * j / 8.0;
            Vector psi(2);
            psi << std::cos(alpha), std::polar(std::sin(alpha), beta);
            const double e = (psi.adjoint() * a.matrix() * psi)(0, 0).real();
            CHECK(std::abs(e - std::cos(2.0 * alpha)) < 1e-12);
        }
    }
}

TEST_CASE("state validation") {
    Vector v = Vector::Zero(4);
    v(0) = 2.0;
    CHECK_THROWS_AS(BipartiteState::pure(v, 2, 2), std::invalid_argument);
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = 1.5;
    rho(1, 1) = -0.5;
    CHECK_THROWS_AS(BipartiteState::mixed(rho, 2, 2), std::invalid_argument);
}

TEST_CASE("sample_outcomes") {
    JointProbs certain;
    certain.p[0][0] = 1.0;
    const CountsTable c = sample_outcomes(certain, 100, 42);
    CHECK(c.n[0][0] == 100);
    CHECK(c.total() == 100);

    JointProbs uniform;
    for (auto& row : uniform.p) row = {0.25, 0.25};
    const std::uint64_t n = 100000;
    const CountsTable u = sample_outcomes(uniform, n, 7);
    const double bound = 5.0 * std::sqrt(n * 0.25 * 0.75);
    for (auto& row : u.n)
        for (auto v : row) CHECK(std::abs(static_cast<double>(v) - n / 4.0) < bound);

    const CountsTable again = sample_outcomes(uniform, n, 7);
    CHECK(again.n == u.n);
    const CountsTable other = sample_outcomes(uniform, n, 8);
    CHECK(other.n != u.n);

    JointProbs noisy = certain;
    noisy.p[1][1] = -1e-13;
    CHECK(sample_outcomes(noisy, 10, 1).n[0][0] == 10);
    CHECK_THROWS_AS(sample_outcomes(uniform, 0, 1), std::invalid_argument);
}

TEST_CASE("POVM audit over random inputs") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index dim = 2 + t % 5;
        const PovmDefects a = povm_defects(povm_from_observable(random_observable(dim, rng)));
        const PovmDefects u = povm_defects(povm_from_unitary(Unitary::from_matrix(haar_random_unitary(dim, rng))));
        CHECK(a.completeness < 1e-10);
        CHECK(u.completeness < 1e-10);
        CHECK(a.min_eigenvalue >= -1e-10);
        CHECK(u.min_eigenvalue >= -1e-10);
    }
}

TEST_CASE("Tsirelson audit") {
    std::mt19937_64 rng(17);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const BipartiteState s = BipartiteState::pure(haar_random_state(4, rng), 2, 2);
        const double v = chsh(s, random_projective_observable(2, rng), random_projective_observable(2, rng),
                              random_projective_observable(2, rng), random_projective_observable(2, rng));
        worst = std::max(worst, std::abs(v));
    }
    CHECK(worst <= 2.0 * kSqrt2 + 1e-9);
    CHECK(worst > 2.0);
    const Observable p = random_projective_observable(3, rng);
    const Eigen::VectorXd ev = p.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) CHECK(std::abs(std::abs(ev(i)) - 1.0) < 1e-12);
}
