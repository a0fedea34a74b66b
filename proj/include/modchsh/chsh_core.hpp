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

// Finite-dimensional CHSH layer: binary POVMs built from bounded observables,
// bipartite correlations, the joint outcome table and the CHSH
// combination. Everything here is a pure function of immutable values.

#include <array>
#include <cstdint>

#include <Eigen/Dense>

namespace modchsh::chsh {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kSpectrumTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kNormTol = 1e-12;

/// Hermitian operator whose spectrum lies in [-1, 1].
///
/// Construction rejects anything outside the bound instead of rescaling it;
/// use rescale_to_unit_spectrum() when rescaling is actually wanted.
class Observable {
public:
    static Observable from_matrix(const Matrix& m);

    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    Eigen::VectorXd eigenvalues() const;

private:
    explicit Observable(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

class Unitary {
public:
    static Unitary from_matrix(const Matrix& m);

    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }

private:
    explicit Unitary(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

/// Two-outcome POVM {E+, E-}; E+ + E- = 1, both positive semidefinite.
struct BinaryPovm {
    Matrix plus;
    Matrix minus;
};

/// Largest elementwise deviation from completeness and the smallest effect
/// eigenvalue; used by callers that audit POVMs.
struct PovmDefects {
    double completeness = 0.0;
    double min_eigenvalue = 0.0;
};
PovmDefects povm_defects(const BinaryPovm& povm);

/// State of a two-party system, stored as a density matrix on A ⊗ B
/// (party A is the most significant tensor factor).
class BipartiteState {
public:
    static BipartiteState pure(const Vector& psi, Eigen::Index dim_a, Eigen::Index dim_b);
    static BipartiteState mixed(const Matrix& rho, Eigen::Index dim_a, Eigen::Index dim_b);
    static BipartiteState product(const Vector& psi_a, const Vector& psi_b);
    static BipartiteState maximally_mixed(Eigen::Index dim_a, Eigen::Index dim_b);
    /// (|01> - |10>)/√2.
    static BipartiteState singlet();

    Eigen::Index dim_a() const { return dim_a_; }
    Eigen::Index dim_b() const { return dim_b_; }
    const Matrix& density() const { return rho_; }

    /// Re tr(ρ · (a ⊗ b)).
    double expectation(const Matrix& a, const Matrix& b) const;

private:
    BipartiteState(Matrix rho, Eigen::Index dim_a, Eigen::Index dim_b)
        : rho_(std::move(rho)), dim_a_(dim_a), dim_b_(dim_b) {}
    Matrix rho_;
    Eigen::Index dim_a_;
    Eigen::Index dim_b_;
};

enum class Outcome : int { plus = 0, minus = 1 };

/// Joint outcome probabilities P[k][l], index 0 = "+", 1 = "-".
struct JointProbs {
    std::array<std::array<double, 2>, 2> p{};

    double at(Outcome k, Outcome l) const { return p[static_cast<int>(k)][static_cast<int>(l)]; }
    double sum() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }
    /// P++ + P-- - P+- - P-+.
    double correlation() const { return p[0][0] + p[1][1] - p[0][1] - p[1][0]; }
    double marginal_a(Outcome k) const { return p[static_cast<int>(k)][0] + p[static_cast<int>(k)][1]; }
    double marginal_b(Outcome l) const { return p[0][static_cast<int>(l)] + p[1][static_cast<int>(l)]; }
};

/// Counts in the same layout as JointProbs.
struct CountsTable {
    std::array<std::array<std::uint64_t, 2>, 2> n{};

    std::uint64_t total() const { return n[0][0] + n[0][1] + n[1][0] + n[1][1]; }
    /// Empirical correlation (n++ + n-- - n+- - n-+) / N.
    double correlation() const;
};

BinaryPovm povm_from_observable(const Observable& a);
BinaryPovm povm_from_unitary(const Unitary& d);
Observable observable_from_unitary(const Unitary& d);

/// diag(cos(θ + π/2), cos(θ - π/2)) = diag(-sin θ, sin θ); with `normalized`
/// the eigenvalues are rescaled to ±1.
Observable two_level_observable(double theta, bool normalized);

/// Divides a Hermitian matrix by its spectral radius (no-op when already
/// inside [-1, 1]).
Observable rescale_to_unit_spectrum(const Matrix& m);

Observable pauli_x();
Observable pauli_y();
Observable pauli_z();

double correlation(const BipartiteState& state, const Observable& a, const Observable& b);
JointProbs joint_probs(const BipartiteState& state, const Observable& a, const Observable& b);
double chsh(const BipartiteState& state, const Observable& a1, const Observable& a2,
            const Observable& b1, const Observable& b2);

/// Draws `shots` independent outcomes from `probs`. Shot i uses the counter
/// (seed, stream, i), so any partition of the shots gives the same table.
/// Slightly negative entries from rounding are clamped to zero here only.
CountsTable sample_outcomes(const JointProbs& probs, std::uint64_t shots, std::uint64_t seed,
                            std::uint64_t stream = 0);

}  // namespace modchsh::chsh
