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

#include "spinmech/quantum_core.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace spinmech {

namespace {

void require_same_spec(const HilbertSpec& a, const HilbertSpec& b, const char* what) {
    if (!(a == b)) {
        throw Error(ErrorCode::SpecMismatch, std::string(what) + ": Hilbert specs differ");
    }
}

Matrix pauli(char which) {
    Matrix m = Matrix::Zero(2, 2);
    const Complex i(0.0, 1.0);
    switch (which) {
        case 'x': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 'y': m(0, 1) = -i; m(1, 0) = i; break;
        case 'z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        case '+': m(0, 1) = 1.0; break;  // |up><down|
        case '-': m(1, 0) = 1.0; break;  // |down><up|
        default: break;
    }
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

HilbertSpec::HilbertSpec(int n_qubits, int fock_dim) : n_qubits_(n_qubits), fock_dim_(fock_dim) {
    if (n_qubits < 0 || n_qubits > 8) {
        throw Error(ErrorCode::InvalidArgument, "n_qubits must be in [0, 8], got " + std::to_string(n_qubits));
    }
    if (fock_dim < 1) {
        throw Error(ErrorCode::InvalidArgument, "fock_dim must be >= 1, got " + std::to_string(fock_dim));
    }
}

Operator::Operator(HilbertSpec spec, Matrix matrix) : spec_(spec), matrix_(std::move(matrix)) {
    if (matrix_.rows() != spec_.dim() || matrix_.cols() != spec_.dim()) {
        throw Error(ErrorCode::SpecMismatch,
                    "operator is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                        ", spec dimension is " + std::to_string(spec_.dim()));
    }
}

Operator Operator::identity(const HilbertSpec& spec) { return Operator(spec, Matrix::Identity(spec.dim(), spec.dim())); }

Operator Operator::zero(const HilbertSpec& spec) { return Operator(spec, Matrix::Zero(spec.dim(), spec.dim())); }

Operator Operator::adjoint() const { return Operator(spec_, matrix_.adjoint()); }

bool Operator::is_hermitian(double tol) const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

SparseMatrix Operator::sparse(double prune) const {
    std::vector<Eigen::Triplet<Complex>> trips;
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
        for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
            if (std::abs(matrix_(i, j)) > prune) trips.emplace_back(i, j, matrix_(i, j));
        }
    }
    SparseMatrix s(matrix_.rows(), matrix_.cols());
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

Operator& Operator::operator+=(const Operator& other) {
    require_same_spec(spec_, other.spec_, "operator +");
    matrix_ += other.matrix_;
    return *this;
}

Operator& Operator::operator-=(const Operator& other) {
    require_same_spec(spec_, other.spec_, "operator -");
    matrix_ -= other.matrix_;
    return *this;
}

Operator& Operator::operator*=(Complex scale) {
    matrix_ *= scale;
    return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same_spec(a.spec(), b.spec(), "operator *");
    return Operator(a.spec(), a.matrix() * b.matrix());
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

DensityMatrix::DensityMatrix(HilbertSpec spec, Matrix matrix, TrustedTag)
    : spec_(spec), matrix_(std::move(matrix)) {
    if (matrix_.rows() != spec_.dim() || matrix_.cols() != spec_.dim()) {
        throw Error(ErrorCode::SpecMismatch, "density matrix dimension does not match spec");
    }
    matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
}

DensityMatrix::DensityMatrix(HilbertSpec spec, Matrix matrix) : DensityMatrix(spec, matrix, TrustedTag{}) {
    const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol) {
        throw Error(ErrorCode::InvalidArgument, "density matrix is not Hermitian (max |rho - rho^+| = " +
                                                    std::to_string(herm) + ")");
    }
    const double tr_err = std::abs(matrix_.trace() - Complex(1.0, 0.0));
    if (tr_err > kTraceTol) {
        throw Error(ErrorCode::InvalidArgument, "density matrix trace deviates from 1 by " + std::to_string(tr_err));
    }
    const double lam = min_eigenvalue();
    if (lam < kPositivityTol) {
        throw Error(ErrorCode::InvalidArgument, "density matrix has eigenvalue " + std::to_string(lam));
    }
}

DensityMatrix DensityMatrix::trusted(HilbertSpec spec, Matrix matrix) {
    return DensityMatrix(spec, std::move(matrix), TrustedTag{});
}

DensityMatrix DensityMatrix::from_pure(const HilbertSpec& spec, const Vector& psi) {
    if (psi.size() != spec.dim()) {
        throw Error(ErrorCode::SpecMismatch, "state vector dimension does not match spec");
    }
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-8) {
        throw Error(ErrorCode::InvalidArgument, "state vector is not normalised (norm " + std::to_string(norm) + ")");
    }
    Vector v = psi / norm;
    return DensityMatrix(spec, v * v.adjoint(), TrustedTag{});
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

StateDiagnostics DensityMatrix::diagnostics() const {
    return {(matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(), std::abs(matrix_.trace() - Complex(1.0, 0.0)),
            min_eigenvalue()};
}

Operator embed_qubit(const HilbertSpec& spec, int qubit, const Matrix& op2) {
    if (qubit < 0 || qubit >= spec.n_qubits()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "qubit index " + std::to_string(qubit) + " out of range for " +
                        std::to_string(spec.n_qubits()) + " qubits");
    }
    const int left = 1 << qubit;
    const int right = (1 << (spec.n_qubits() - qubit - 1)) * spec.fock_dim();
    Matrix m = kron(kron(Matrix::Identity(left, left), op2), Matrix::Identity(right, right));
    return Operator(spec, std::move(m));
}

Operator embed_oscillator(const HilbertSpec& spec, const Matrix& op) {
    if (op.rows() != spec.fock_dim() || op.cols() != spec.fock_dim()) {
        throw Error(ErrorCode::SpecMismatch, "oscillator operator dimension does not match fock_dim");
    }
    const int q = spec.qubit_dim();
    return Operator(spec, kron(Matrix::Identity(q, q), op));
}

LadderOps fock_ops(const HilbertSpec& spec) {
    if (spec.fock_dim() < 2) {
        throw Error(ErrorCode::InvalidArgument, "ladder operators need fock_dim >= 2");
    }
    const int n = spec.fock_dim();
    Matrix a = Matrix::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
    Operator ann = embed_oscillator(spec, a);
    Operator cre = ann.adjoint();
    Operator num = cre * ann;
    return {std::move(ann), std::move(cre), std::move(num)};
}

PauliOps qubit_ops(const HilbertSpec& spec, int qubit) {
    return {embed_qubit(spec, qubit, pauli('x')), embed_qubit(spec, qubit, pauli('y')),
            embed_qubit(spec, qubit, pauli('z')), embed_qubit(spec, qubit, pauli('+')),
            embed_qubit(spec, qubit, pauli('-'))};
}

Complex expectation(const DensityMatrix& rho, const Operator& op) {
    require_same_spec(rho.spec(), op.spec(), "expectation");
    // tr(A B) = sum_ij A_ij B_ji
    return (op.matrix().cwiseProduct(rho.matrix().transpose())).sum();
}

DensityMatrix partial_trace_to_oscillator(const DensityMatrix& rho) {
    const HilbertSpec& s = rho.spec();
    const int f = s.fock_dim();
    Matrix out = Matrix::Zero(f, f);
    for (int q = 0; q < s.qubit_dim(); ++q) out += rho.matrix().block(q * f, q * f, f, f);
    return DensityMatrix::trusted(s.oscillator(), std::move(out));
}

Matrix partial_trace_to_qubits(const DensityMatrix& rho) {
    const HilbertSpec& s = rho.spec();
    const int f = s.fock_dim();
    const int q = s.qubit_dim();
    Matrix out(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) out(i, j) = rho.matrix().block(i * f, j * f, f, f).trace();
    return out;
}

int coherent_nmax_required(double abs_alpha) {
    return static_cast<int>(std::ceil(abs_alpha * abs_alpha + 5.0 * abs_alpha - 1e-12));
}

Vector coherent_state(int fock_dim, Complex alpha) {
    const double a = std::abs(alpha);
    const int n_max = fock_dim - 1;
    if (n_max < coherent_nmax_required(a)) {
        throw Error(ErrorCode::TruncationRisk,
                    "coherent amplitude |alpha| = " + std::to_string(a) + " needs n_max >= " +
                        std::to_string(coherent_nmax_required(a)) + ", have " + std::to_string(n_max));
    }
    Vector v(fock_dim);
    v(0) = std::exp(-0.5 * a * a);
    for (int n = 1; n < fock_dim; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    v /= v.norm();
    return v;
}

Vector fock_state(int fock_dim, int n) {
    if (n < 0 || n >= fock_dim) {
        throw Error(ErrorCode::IndexOutOfRange, "Fock level " + std::to_string(n) + " outside truncation");
    }
    Vector v = Vector::Zero(fock_dim);
    v(n) = 1.0;
    return v;
}

Matrix thermal_oscillator(int fock_dim, double nbar) {
    if (nbar < 0.0) throw Error(ErrorCode::InvalidArgument, "thermal occupation must be >= 0");
    Matrix m = Matrix::Zero(fock_dim, fock_dim);
    if (nbar == 0.0) {
        m(0, 0) = 1.0;
        return m;
    }
    const double r = nbar / (1.0 + nbar);
    double p = 1.0, total = 0.0;
    for (int n = 0; n < fock_dim; ++n) {
        m(n, n) = p;
        total += p;
        p *= r;
    }
    m /= total;
    return m;
}

namespace {

Vector spin_register(const HilbertSpec& spec, const std::vector<SpinState>& spins) {
    if (static_cast<int>(spins.size()) != spec.n_qubits()) {
        throw Error(ErrorCode::SpecMismatch, "expected " + std::to_string(spec.n_qubits()) + " spin states");
    }
    int config = 0;
    for (SpinState s : spins) config = (config << 1) | (s == SpinState::Down ? 1 : 0);
    Vector v = Vector::Zero(spec.qubit_dim());
    v(config) = 1.0;
    return v;
}

}  // namespace

Vector product_state(const HilbertSpec& spec, const std::vector<SpinState>& spins, const Vector& oscillator) {
    if (oscillator.size() != spec.fock_dim()) {
        throw Error(ErrorCode::SpecMismatch, "oscillator state dimension does not match fock_dim");
    }
    return kron(spin_register(spec, spins), oscillator);
}

DensityMatrix product_density(const HilbertSpec& spec, const std::vector<SpinState>& spins,
                              const Matrix& oscillator) {
    if (oscillator.rows() != spec.fock_dim() || oscillator.cols() != spec.fock_dim()) {
        throw Error(ErrorCode::SpecMismatch, "oscillator state dimension does not match fock_dim");
    }
    Vector q = spin_register(spec, spins);
    return DensityMatrix(spec, kron(q * q.adjoint(), oscillator));
}

}  // namespace spinmech
