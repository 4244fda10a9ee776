// Copyright 2026 The spinmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Operator algebra on the truncated space qubit_0 ⊗ ... ⊗ qubit_{N-1} ⊗ oscillator.
//
// Basis conventions used throughout the library:
//   * qubit 0 is the most significant tensor factor, the oscillator the least;
//   * for each qubit, basis index 0 is |up> (sigma_z = +1) and index 1 is |down>;
//   * sigma_minus = |down><up|, so relaxation drives a qubit to |down>.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "spinmech/error.hpp"

namespace spinmech {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

enum class SpinState { Up, Down };
enum class Axis { X, Y, Z };

class HilbertSpec {
public:
    HilbertSpec(int n_qubits, int fock_dim);

    int n_qubits() const noexcept { return n_qubits_; }
    int fock_dim() const noexcept { return fock_dim_; }
    int qubit_dim() const noexcept { return 1 << n_qubits_; }
    int dim() const noexcept { return qubit_dim() * fock_dim_; }

    /// Index of |qubit bits, n> where bit j of `qubit_config` (counted from the
    /// most significant of n_qubits bits) is 0 for up and 1 for down.
    int index(int qubit_config, int n) const noexcept { return qubit_config * fock_dim_ + n; }

    HilbertSpec oscillator() const { return HilbertSpec(0, fock_dim_); }

    bool operator==(const HilbertSpec&) const = default;

private:
    int n_qubits_;
    int fock_dim_;
};

class Operator {
public:
    Operator(HilbertSpec spec, Matrix matrix);

    static Operator identity(const HilbertSpec& spec);
    static Operator zero(const HilbertSpec& spec);

    const HilbertSpec& spec() const noexcept { return spec_; }
    const Matrix& matrix() const noexcept { return matrix_; }

    Operator adjoint() const;
    bool is_hermitian(double tol = 1e-12) const;
    SparseMatrix sparse(double prune = 0.0) const;

    Operator& operator+=(const Operator& other);
    Operator& operator-=(const Operator& other);
    Operator& operator*=(Complex scale);

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(Operator a, Complex s) { return a *= s; }
    friend Operator operator*(Complex s, Operator a) { return a *= s; }
    friend Operator operator*(double s, Operator a) { return a *= Complex(s, 0.0); }
    friend Operator operator*(const Operator& a, const Operator& b);

private:
    HilbertSpec spec_;
    Matrix matrix_;
};

Operator commutator(const Operator& a, const Operator& b);

struct StateDiagnostics {
    double hermiticity_error;  // max |rho - rho^dagger|
    double trace_error;        // |tr rho - 1|
    double min_eigenvalue;
};

class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kTraceTol = 1e-9;
    static constexpr double kPositivityTol = -1e-8;

    /// Validating constructor; throws InvalidArgument when the matrix is not a
    /// density matrix within the tolerances above.
    DensityMatrix(HilbertSpec spec, Matrix matrix);

    /// Skips the eigenvalue check but still symmetrises. For states produced by
    /// the integrator, where the invariants are tracked separately.
    static DensityMatrix trusted(HilbertSpec spec, Matrix matrix);

    static DensityMatrix from_pure(const HilbertSpec& spec, const Vector& psi);

    const HilbertSpec& spec() const noexcept { return spec_; }
    const Matrix& matrix() const noexcept { return matrix_; }

    StateDiagnostics diagnostics() const;
    double min_eigenvalue() const;

private:
    struct TrustedTag {};
    DensityMatrix(HilbertSpec spec, Matrix matrix, TrustedTag);

    HilbertSpec spec_;
    Matrix matrix_;
};

struct LadderOps {
    Operator annihilation;
    Operator creation;
    Operator number;
};

struct PauliOps {
    Operator sx, sy, sz, s_plus, s_minus;
};

LadderOps fock_ops(const HilbertSpec& spec);
PauliOps qubit_ops(const HilbertSpec& spec, int qubit);

/// Single-qubit 2x2 operator embedded at slot `qubit` by identity padding.
Operator embed_qubit(const HilbertSpec& spec, int qubit, const Matrix& op2);
/// fock_dim x fock_dim operator embedded on the oscillator factor.
Operator embed_oscillator(const HilbertSpec& spec, const Matrix& op);

/// tr(op * rho).
Complex expectation(const DensityMatrix& rho, const Operator& op);

DensityMatrix partial_trace_to_oscillator(const DensityMatrix& rho);
/// Reduced state of the qubit register (2^n x 2^n).
Matrix partial_trace_to_qubits(const DensityMatrix& rho);

/// Smallest n_max allowed for a coherent amplitude |alpha|: ceil(|a|^2 + 5|a|).
int coherent_nmax_required(double abs_alpha);

/// Fock expansion e^{-|a|^2/2} a^n / sqrt(n!) truncated to fock_dim levels and
/// renormalised. Throws TruncationRisk when the truncation guard fails.
Vector coherent_state(int fock_dim, Complex alpha);

Vector fock_state(int fock_dim, int n);

/// Truncated Gibbs state with mean occupation `nbar` (renormalised).
Matrix thermal_oscillator(int fock_dim, double nbar);

/// |s_0 ... s_{N-1}> ⊗ |osc>.
Vector product_state(const HilbertSpec& spec, const std::vector<SpinState>& spins,
                     const Vector& oscillator);

/// rho_qubits ⊗ rho_osc with every qubit in a definite state.
DensityMatrix product_density(const HilbertSpec& spec, const std::vector<SpinState>& spins,
                              const Matrix& oscillator);

}  // namespace spinmech
