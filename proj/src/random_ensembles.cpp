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

#include "modchsh/random_ensembles.hpp"

#include <cmath>
#include <complex>

namespace modchsh::chsh {
namespace {

Matrix ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = {re, im};
        }
    }
    return m;
}

}  // namespace

Vector haar_random_state(Eigen::Index dim, std::mt19937_64& rng) {
    Vector v = ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

Matrix haar_random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
    const Matrix z = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < dim; ++k) {
        const std::complex<double> d = r(k, k);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(k) *= d / mag;
    }
    return q;
}

Observable random_observable(Eigen::Index dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> spectrum(-1.0, 1.0);
    Eigen::VectorXd lambda(dim);
    for (Eigen::Index k = 0; k < dim; ++k) lambda(k) = spectrum(rng);
    const Matrix u = haar_random_unitary(dim, rng);
    Matrix m = u * lambda.cast<std::complex<double>>().asDiagonal() * u.adjoint();
    m = (m + m.adjoint()) / 2.0;
    return Observable::from_matrix(m);
}

Observable random_projective_observable(Eigen::Index dim, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    Eigen::VectorXd lambda(dim);
    for (Eigen::Index k = 0; k < dim; ++k) lambda(k) = coin(rng) ? 1.0 : -1.0;
    if (dim >= 2) {
        lambda(0) = 1.0;
        lambda(1) = -1.0;
    }
    const Matrix u = haar_random_unitary(dim, rng);
    Matrix m = u * lambda.cast<std::complex<double>>().asDiagonal() * u.adjoint();
    m = (m + m.adjoint()) / 2.0;
    return rescale_to_unit_spectrum(m);
}

}  // namespace modchsh::chsh
