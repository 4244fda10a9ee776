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

#include "spinmech/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "spinmech/membrane.hpp"

namespace spinmech {

namespace {

using Triplet = Eigen::Triplet<Complex>;

void check_rate(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::NegativeRate, std::string(name) + " must be finite and >= 0, got " + std::to_string(v));
    }
}

// -(I ⊗ K + K^T ⊗ I) for a d x d sparse K.
void add_anticommutator(std::vector<Triplet>& out, const SparseMatrix& K, Complex scale) {
    const Eigen::Index d = K.rows();
    for (Eigen::Index c = 0; c < K.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(K, c); it; ++it) {
            const Eigen::Index k = it.row(), l = it.col();
            for (Eigen::Index i = 0; i < d; ++i) {
                out.emplace_back(i * d + k, i * d + l, scale * it.value());  // I ⊗ K
                out.emplace_back(l * d + i, k * d + i, scale * it.value());  // K^T ⊗ I
            }
        }
    }
}

// scale * conj(S) ⊗ S
void add_sandwich(std::vector<Triplet>& out, const SparseMatrix& S, Complex scale) {
    const Eigen::Index d = S.rows();
    std::vector<std::tuple<Eigen::Index, Eigen::Index, Complex>> e;
    e.reserve(S.nonZeros());
    for (Eigen::Index c = 0; c < S.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(S, c); it; ++it) e.emplace_back(it.row(), it.col(), it.value());
    for (const auto& [i, j, a] : e) {
        const Complex ca = scale * std::conj(a);
        for (const auto& [k, l, b] : e) out.emplace_back(i * d + k, j * d + l, ca * b);
    }
}

}  // namespace

void QubitParams::validate() const {
    check_rate(Gamma, "Gamma");
    check_rate(Gamma_phi_o, "Gamma_phi_o");
    check_rate(Gamma_phi_v, "Gamma_phi_v");
    check_rate(Gamma_phi_h, "Gamma_phi_h");
    check_rate(N_th, "qubit thermal occupation");
    if (!std::isfinite(Omega) || !std::isfinite(delta) || !std::isfinite(g) || !std::isfinite(Delta)) {
        throw Error(ErrorCode::InvalidArgument, "qubit parameters must be finite");
    }
}

void ModelParams::validate() const {
    if (static_cast<int>(qubits.size()) != spec.n_qubits()) {
        throw Error(ErrorCode::SpecMismatch, "model has " + std::to_string(qubits.size()) +
                                                 " qubits but the Hilbert spec has " +
                                                 std::to_string(spec.n_qubits()));
    }
    if (!(omega_m > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega_m must be positive");
    check_rate(gamma_m, "gamma_m");
    check_rate(N_th_mech, "mechanical thermal occupation");
    for (const auto& q : qubits) q.validate();
}

double thermal_occupation(double omega, double temperature) {
    if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "thermal occupation needs omega > 0");
    if (temperature < 0.0) throw Error(ErrorCode::InvalidArgument, "temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    const double x = constants::hbar * omega / (constants::k_B * temperature);
    return 1.0 / std::expm1(x);
}

double scaled_occupation(double w, double nbar_ref) {
    if (nbar_ref <= 0.0 || w <= 0.0) return 0.0;
    return 1.0 / std::expm1(w * std::log1p(1.0 / nbar_ref));
}

Operator hamiltonian_N(const ModelParams& params) {
    params.validate();
    const HilbertSpec& s = params.spec;
    // fock_dim 1 freezes the oscillator in its ground state: b = 0.
    const bool frozen = s.fock_dim() == 1;
    Operator H = Operator::zero(s);
    Operator x = Operator::zero(s);
    if (!frozen) {
        const auto [a, ad, n] = fock_ops(s);
        H = params.omega_m * n;
        x = a + ad;
    }
    for (int j = 0; j < s.n_qubits(); ++j) {
        const auto& q = params.qubits[j];
        const PauliOps p = qubit_ops(s, j);
        H += (0.5 * q.Omega) * p.sx;
        H -= (0.5 * q.delta) * p.sz;
        if (!frozen) H += q.g * (p.sz * x);
    }
    return H;
}

Operator rabi_hamiltonian(double omega_m, double Omega, double g, int fock_dim) {
    const HilbertSpec s(1, fock_dim);
    const auto [a, ad, n] = fock_ops(s);
    const PauliOps p = qubit_ops(s, 0);
    return (0.5 * Omega) * p.sz - g * (p.sx * (a + ad)) + omega_m * n;
}

Operator effective_hamiltonian(double omega_m, double Omega, double g, int fock_dim) {
    if (!(Omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "effective Hamiltonian needs Omega > 0");
    const HilbertSpec s(0, fock_dim);
    const auto [a, ad, n] = fock_ops(s);
    const Operator x = a + ad;
    return omega_m * n - (g * g / Omega) * (x * x);
}

double effective_frequency(double omega_m, double Omega, double g) {
    const double r = 1.0 - 4.0 * g * g / (omega_m * Omega);
    return r >= 0.0 ? omega_m * std::sqrt(r) : std::nan("");
}

Liouvillian::Liouvillian(HilbertSpec spec, SparseMatrix superop, std::optional<Matrix> frame, std::string kind)
    : spec_(spec), superop_(std::move(superop)), frame_(std::move(frame)), kind_(std::move(kind)) {
    const Eigen::Index d2 = static_cast<Eigen::Index>(spec_.dim()) * spec_.dim();
    if (superop_.rows() != d2 || superop_.cols() != d2) {
        throw Error(ErrorCode::SpecMismatch, "superoperator dimension does not match spec");
    }
    superop_.makeCompressed();
}

Matrix Liouvillian::to_frame(const Matrix& rho) const {
    return frame_ ? Matrix(frame_->adjoint() * rho * *frame_) : rho;
}

Matrix Liouvillian::from_frame(const Matrix& rho) const {
    return frame_ ? Matrix(*frame_ * rho * frame_->adjoint()) : rho;
}

Matrix Liouvillian::apply(const Matrix& rho) const {
    const Vector out = superop_ * vec(to_frame(rho));
    return from_frame(unvec(out, spec_.dim()));
}

double Liouvillian::trace_preservation_error() const {
    const Eigen::Index d = spec_.dim();
    Eigen::VectorXcd sums = Eigen::VectorXcd::Zero(superop_.cols());
    for (Eigen::Index c = 0; c < superop_.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(superop_, c); it; ++it)
            if (it.row() % (d + 1) == 0) sums(it.col()) += it.value();
    return sums.size() ? sums.cwiseAbs().maxCoeff() : 0.0;
}

double Liouvillian::norm1() const {
    double best = 0.0;
    for (Eigen::Index c = 0; c < superop_.outerSize(); ++c) {
        double s = 0.0;
        for (SparseMatrix::InnerIterator it(superop_, c); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

SparseMatrix lindblad_superoperator(const SparseMatrix& H, const std::vector<Channel>& channels,
                                    bool allow_negative) {
    const Eigen::Index d = H.rows();
    std::vector<Triplet> t;
    const Complex mi(0.0, -1.0);
    // -i (I ⊗ H - H^T ⊗ I)
    for (Eigen::Index c = 0; c < H.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(H, c); it; ++it) {
            const Eigen::Index k = it.row(), l = it.col();
            for (Eigen::Index i = 0; i < d; ++i) {
                t.emplace_back(i * d + k, i * d + l, mi * it.value());
                t.emplace_back(l * d + i, k * d + i, -mi * it.value());
            }
        }
    }
    SparseMatrix K(d, d);
    for (const auto& ch : channels) {
        if (!allow_negative) check_rate(ch.rate, "dissipator rate");
        if (ch.rate == 0.0) continue;
        if (ch.op.rows() != d || ch.op.cols() != d) {
            throw Error(ErrorCode::SpecMismatch, "jump operator dimension does not match Hamiltonian");
        }
        SparseMatrix od = ch.op.adjoint();
        K += SparseMatrix(ch.rate * (od * ch.op));
        add_sandwich(t, ch.op, Complex(2.0 * ch.rate, 0.0));
    }
    add_anticommutator(t, K, Complex(-1.0, 0.0));
    SparseMatrix L(d * d, d * d);
    L.setFromTriplets(t.begin(), t.end());
    L.prune(Complex(0.0, 0.0), 0.0);
    return L;
}

std::vector<Channel> bare_channels(const ModelParams& params) {
    params.validate();
    const HilbertSpec& s = params.spec;
    std::vector<Channel> ch;
    if (params.gamma_m > 0.0 && s.fock_dim() > 1) {
        const auto [a, ad, n] = fock_ops(s);
        ch.push_back({0.5 * params.gamma_m * (params.N_th_mech + 1.0), a.sparse()});
        ch.push_back({0.5 * params.gamma_m * params.N_th_mech, ad.sparse()});
    }
    for (int j = 0; j < s.n_qubits(); ++j) {
        const auto& q = params.qubits[j];
        const PauliOps p = qubit_ops(s, j);
        ch.push_back({0.5 * q.Gamma * (q.N_th + 1.0), p.s_minus.sparse()});
        ch.push_back({0.5 * q.Gamma * q.N_th, p.s_plus.sparse()});
        ch.push_back({0.5 * q.Gamma_phi(), p.sz.sparse()});
    }
    return ch;
}

Liouvillian liouvillian(const ModelParams& params, const Operator& H) {
    params.validate();
    if (!(H.spec() == params.spec)) throw Error(ErrorCode::SpecMismatch, "Hamiltonian spec differs from model");
    if (!H.is_hermitian(1e-10)) throw Error(ErrorCode::NonHermitian, "Hamiltonian is not Hermitian");
    return Liouvillian(params.spec, lindblad_superoperator(H.sparse(), bare_channels(params)), std::nullopt, "bare");
}

namespace {

struct Component {
    Eigen::Index j, k;
    Complex value;
    double w;
};

// Splits an operator given in the eigenbasis into Bohr-frequency bins.
std::vector<std::pair<double, SparseMatrix>> bohr_bins(const Matrix& S, const Eigen::VectorXd& E, double tol) {
    const Eigen::Index d = S.rows();
    std::vector<Component> comps;
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index j = 0; j < d; ++j)
            if (std::abs(S(j, k)) > 1e-12) comps.push_back({j, k, S(j, k), E(k) - E(j)});
    std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) { return a.w < b.w; });

    std::vector<std::pair<double, SparseMatrix>> bins;
    std::size_t start = 0;
    while (start < comps.size()) {
        std::size_t end = start + 1;
        while (end < comps.size() && comps[end].w - comps[end - 1].w <= tol) ++end;
        std::vector<Triplet> t;
        double wsum = 0.0;
        for (std::size_t m = start; m < end; ++m) {
            t.emplace_back(comps[m].j, comps[m].k, comps[m].value);
            wsum += comps[m].w;
        }
        SparseMatrix op(d, d);
        op.setFromTriplets(t.begin(), t.end());
        bins.emplace_back(wsum / static_cast<double>(end - start), std::move(op));
        start = end;
    }
    return bins;
}

// Hermitian coupling operator: upward/downward weights from the bath occupation
// at each Bohr frequency; the zero bin gets `zero_rate`.
void add_hermitian_channel(std::vector<Channel>& out, const Matrix& Se, const Eigen::VectorXd& E, double tol,
                           double gamma, double zero_rate, const std::function<double(double)>& occupation) {
    for (auto& [w, op] : bohr_bins(Se, E, tol)) {
        double r;
        if (w > tol) r = 0.5 * gamma * (occupation(w) + 1.0);
        else if (w < -tol) r = 0.5 * gamma * occupation(-w);
        else r = zero_rate;
        if (r > 0.0) out.push_back({r, std::move(op)});
    }
}

}  // namespace

Liouvillian dressed_liouvillian(const ModelParams& params, const Operator& H, double bin_tol) {
    params.validate();
    if (!(H.spec() == params.spec)) throw Error(ErrorCode::SpecMismatch, "Hamiltonian spec differs from model");
    if (!H.is_hermitian(1e-10)) throw Error(ErrorCode::NonHermitian, "Hamiltonian is not Hermitian");
    if (!(bin_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "bin tolerance must be >= 0");

    const HilbertSpec& s = params.spec;
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.matrix());
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigendecomposition failed");
    const Matrix& V = es.eigenvectors();
    const Eigen::VectorXd& E = es.eigenvalues();
    auto in_frame = [&](const Operator& o) { return Matrix(V.adjoint() * o.matrix() * V); };

    std::vector<Channel> ch;
    if (params.gamma_m > 0.0) {
        const auto [a, ad, n] = fock_ops(s);
        const double nbar = params.N_th_mech;
        add_hermitian_channel(ch, in_frame(a + ad), E, bin_tol, params.gamma_m,
                              0.5 * params.gamma_m * (2.0 * nbar + 1.0),
                              [&](double w) { return scaled_occupation(w / params.omega_m, nbar); });
    }
    for (int j = 0; j < s.n_qubits(); ++j) {
        const auto& q = params.qubits[j];
        const PauliOps p = qubit_ops(s, j);
        if (q.Gamma > 0.0) {
            for (auto& [w, op] : bohr_bins(in_frame(p.s_minus), E, bin_tol)) {
                (void)w;
                SparseMatrix up = op.adjoint();
                ch.push_back({0.5 * q.Gamma * (q.N_th + 1.0), std::move(op)});
                if (q.N_th > 0.0) ch.push_back({0.5 * q.Gamma * q.N_th, std::move(up)});
            }
        }
        if (q.Gamma_phi() > 0.0) {
            const double nq = q.N_th;
            add_hermitian_channel(ch, in_frame(p.sz), E, bin_tol, q.Gamma_phi(), 0.5 * q.Gamma_phi(),
                                  [nq](double) { return nq; });
        }
    }

    SparseMatrix Hd(s.dim(), s.dim());
    {
        std::vector<Triplet> t;
        for (int i = 0; i < s.dim(); ++i) t.emplace_back(i, i, E(i));
        Hd.setFromTriplets(t.begin(), t.end());
    }
    return Liouvillian(s, lindblad_superoperator(Hd, ch), Matrix(V), "dressed");
}

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, int dim) { return Eigen::Map<const Matrix>(v.data(), dim, dim); }

}  // namespace spinmech
