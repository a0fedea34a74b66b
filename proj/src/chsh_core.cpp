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

#include "modchsh/chsh_core.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "modchsh/counter_rng.hpp"

namespace modchsh::chsh {
namespace {

using cd = std::complex<double>;

double hermitian_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_square(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
    }
}

Eigen::VectorXd hermitian_spectrum(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

void require_dims(const BipartiteState& state, const Observable& a, const Observable& b) {
    if (a.dim() != state.dim_a() || b.dim() != state.dim_b()) {
        throw std::invalid_argument("observable dimensions do not match the state");
    }
}

}  // namespace

Observable Observable::from_matrix(const Matrix& m) {
    require_square(m, "Observable");
    if (hermitian_defect(m) > kHermitianTol) {
        throw std::invalid_argument("Observable: matrix is not Hermitian");
    }
    Matrix h = (m + m.adjoint()) / 2.0;
    const Eigen::VectorXd ev = hermitian_spectrum(h);
    if (ev.minCoeff() < -1.0 - kSpectrumTol || ev.maxCoeff() > 1.0 + kSpectrumTol) {
        throw std::invalid_argument("Observable: spectrum leaves [-1, 1] (largest |eigenvalue| " +
                                    std::to_string(ev.cwiseAbs().maxCoeff()) + ")");
    }
    return Observable(std::move(h));
}

Eigen::VectorXd Observable::eigenvalues() const { return hermitian_spectrum(m_); }

Unitary Unitary::from_matrix(const Matrix& m) {
    require_square(m, "Unitary");
    const Matrix id = Matrix::Identity(m.rows(), m.cols());
    if ((m.adjoint() * m - id).norm() > kUnitaryTol) {
        throw std::invalid_argument("Unitary: U†U differs from the identity");
    }
    return Unitary(m);
}

PovmDefects povm_defects(const BinaryPovm& povm) {
    const Matrix id = Matrix::Identity(povm.plus.rows(), povm.plus.cols());
    PovmDefects d;
    d.completeness = (povm.plus + povm.minus - id).cwiseAbs().maxCoeff();
    d.min_eigenvalue = std::min(hermitian_spectrum(povm.plus).minCoeff(),
                                hermitian_spectrum(povm.minus).minCoeff());
    return d;
}

BinaryPovm povm_from_observable(const Observable& a) {
    const Matrix id = Matrix::Identity(a.dim(), a.dim());
    return {(id + a.matrix()) / 2.0, (id - a.matrix()) / 2.0};
}

BinaryPovm povm_from_unitary(const Unitary& d) {
    const Matrix id = Matrix::Identity(d.dim(), d.dim());
    const Matrix& u = d.matrix();
    Matrix plus = (id + u.adjoint()) * (id + u) / 4.0;
    Matrix minus = (id - u.adjoint()) * (id - u) / 4.0;
    return {std::move(plus), std::move(minus)};
}

Observable observable_from_unitary(const Unitary& d) {
    return Observable::from_matrix((d.matrix() + d.matrix().adjoint()) / 2.0);
}

Observable two_level_observable(double theta, bool normalized) {
    constexpr double kHalfPi = 1.57079632679489661923;
    double lo = std::cos(theta + kHalfPi);
    double hi = std::cos(theta - kHalfPi);
    if (normalized) {
        const double s = std::abs(std::sin(theta));
        if (s < 1e-12) {
            throw std::invalid_argument("two_level_observable: sin(theta) = 0, nothing to normalize");
        }
        lo /= s;
        hi /= s;
    }
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = lo;
    m(1, 1) = hi;
    return Observable::from_matrix(m);
}

Observable rescale_to_unit_spectrum(const Matrix& m) {
    require_square(m, "rescale_to_unit_spectrum");
    if (hermitian_defect(m) > kHermitianTol) {
        throw std::invalid_argument("rescale_to_unit_spectrum: matrix is not Hermitian");
    }
    const double radius = hermitian_spectrum((m + m.adjoint()) / 2.0).cwiseAbs().maxCoeff();
    if (radius <= 1.0) return Observable::from_matrix(m);
    return Observable::from_matrix(m / radius);
}

Observable pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return Observable::from_matrix(m);
}

Observable pauli_y() {
    Matrix m(2, 2);
    m << cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0);
    return Observable::from_matrix(m);
}

Observable pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return Observable::from_matrix(m);
}

BipartiteState BipartiteState::pure(const Vector& psi, Eigen::Index dim_a, Eigen::Index dim_b) {
    if (dim_a <= 0 || dim_b <= 0 || psi.size() != dim_a * dim_b) {
        throw std::invalid_argument("BipartiteState: vector length must equal dim_a * dim_b");
    }
    if (std::abs(psi.norm() - 1.0) > kNormTol) {
        throw std::invalid_argument("BipartiteState: state vector is not normalized");
    }
    return BipartiteState(psi * psi.adjoint(), dim_a, dim_b);
}

BipartiteState BipartiteState::mixed(const Matrix& rho, Eigen::Index dim_a, Eigen::Index dim_b) {
    if (dim_a <= 0 || dim_b <= 0 || rho.rows() != dim_a * dim_b || rho.cols() != rho.rows()) {
        throw std::invalid_argument("BipartiteState: density matrix must be (dim_a*dim_b)^2");
    }
    if (hermitian_defect(rho) > kHermitianTol) {
        throw std::invalid_argument("BipartiteState: density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - cd(1.0, 0.0)) > kNormTol) {
        throw std::invalid_argument("BipartiteState: density matrix does not have unit trace");
    }
    if (hermitian_spectrum(rho).minCoeff() < -kPositivityTol) {
        throw std::invalid_argument("BipartiteState: density matrix is not positive semidefinite");
    }
    return BipartiteState(rho, dim_a, dim_b);
}

BipartiteState BipartiteState::product(const Vector& psi_a, const Vector& psi_b) {
    return pure(Eigen::kroneckerProduct(psi_a, psi_b).eval(), psi_a.size(), psi_b.size());
}

BipartiteState BipartiteState::maximally_mixed(Eigen::Index dim_a, Eigen::Index dim_b) {
    const Eigen::Index n = dim_a * dim_b;
    return mixed(Matrix::Identity(n, n) / static_cast<double>(n), dim_a, dim_b);
}

BipartiteState BipartiteState::singlet() {
    Vector psi = Vector::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);
    return pure(psi, 2, 2);
}

double BipartiteState::expectation(const Matrix& a, const Matrix& b) const {
    const Matrix op = Eigen::kroneckerProduct(a, b);
    return (rho_ * op).trace().real();
}

double CountsTable::correlation() const {
    const auto total_shots = static_cast<double>(total());
    if (total_shots == 0.0) return 0.0;
    const double same = static_cast<double>(n[0][0] + n[1][1]);
    const double diff = static_cast<double>(n[0][1] + n[1][0]);
    return (same - diff) / total_shots;
}

double correlation(const BipartiteState& state, const Observable& a, const Observable& b) {
    require_dims(state, a, b);
    return state.expectation(a.matrix(), b.matrix());
}

JointProbs joint_probs(const BipartiteState& state, const Observable& a, const Observable& b) {
    require_dims(state, a, b);
    const Matrix id_a = Matrix::Identity(a.dim(), a.dim());
    const Matrix id_b = Matrix::Identity(b.dim(), b.dim());
    const double mean_a = state.expectation(a.matrix(), id_b);
    const double mean_b = state.expectation(id_a, b.matrix());
    const double corr = state.expectation(a.matrix(), b.matrix());
    JointProbs out;
    for (int i = 0; i < 2; ++i) {
        const double k = i == 0 ? 1.0 : -1.0;
        for (int j = 0; j < 2; ++j) {
            const double l = j == 0 ? 1.0 : -1.0;
            out.p[i][j] = (1.0 + k * mean_a + l * mean_b + k * l * corr) / 4.0;
        }
    }
    return out;
}

double chsh(const BipartiteState& state, const Observable& a1, const Observable& a2,
            const Observable& b1, const Observable& b2) {
    return correlation(state, a1, b1) + correlation(state, a1, b2) + correlation(state, a2, b1) -
           correlation(state, a2, b2);
}

CountsTable sample_outcomes(const JointProbs& probs, std::uint64_t shots, std::uint64_t seed,
                            std::uint64_t stream) {
    if (shots == 0) throw std::invalid_argument("sample_outcomes: shots must be >= 1");
    std::array<double, 4> w{};
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        w[i] = std::max(0.0, probs.p[i / 2][i % 2]);
        total += w[i];
    }
    if (!(total > 0.0)) throw std::invalid_argument("sample_outcomes: probabilities sum to zero");
    std::array<double, 4> cumulative{};
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        acc += w[i] / total;
        cumulative[i] = acc;
    }
    cumulative[3] = 1.0;

    CountsTable out;
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const double u = rng::counter_uniform(seed, stream, shot);
        int cell = 0;
        while (u >= cumulative[cell]) ++cell;
        ++out.n[cell / 2][cell % 2];
    }
    return out;
}

}  // namespace modchsh::chsh
